# -*- coding: utf-8 -*-

"""
Separable non-convex regularizers g with closed form proximal operators.

MCP, for kappa, nu > 0:

    g(x) = kappa |x| - x^2 / (2 nu)      if |x| <= nu kappa
           nu kappa^2 / 2                 otherwise

SCAD, for kappa > 0 and nu > 2:

    g(x) = kappa |x|                                      if |x| <= kappa
           (-x^2 + 2 nu kappa |x| - kappa^2) / (2(nu-1))  if kappa < |x| <= nu kappa
           (nu + 1) kappa^2 / 2                           otherwise

The scalar prox subproblem (x - w)^2/(2 lambda) + g(x) is non-convex, so
the prox is found by collecting the stationary point of every piece
(clipped to the piece) together with the piece boundaries, and keeping
the candidate with the lowest subproblem value. Equal values are broken
towards the smallest |x|.

Licensed under the MIT License, see LICENSE.
"""

import logging

import numpy as np

from .data.results import ProxResult
from .errors import InvalidArgumentError
from .utils import as_vector, check_positive

log = logging.getLogger(__name__)

# Subproblem values closer than this are treated as a tie.
TIE_TOL = 1e-12

# nu of a SCAD penalty when none is given.
DEFAULT_SCAD_NU = 3.7


class McpParams(object):
    """
    MCP parameters.
    """
    def __init__(self, kappa, nu):
        self._kappa = check_positive(kappa, 'MCP kappa')
        self._nu = check_positive(nu, 'MCP nu')

    @property
    def kappa(self):
        return self._kappa

    @property
    def nu(self):
        return self._nu

    def __repr__(self):
        return f'McpParams(kappa={self._kappa}, nu={self._nu})'


class ScadParams(object):
    """
    SCAD parameters.
    """
    def __init__(self, kappa, nu):
        self._kappa = check_positive(kappa, 'SCAD kappa')
        if not nu > 2:
            raise InvalidArgumentError(f'SCAD nu must be > 2, got {nu}.')
        self._nu = float(nu)

    @property
    def kappa(self):
        return self._kappa

    @property
    def nu(self):
        return self._nu

    def __repr__(self):
        return f'ScadParams(kappa={self._kappa}, nu={self._nu})'


def _lowest(candidates, values):
    """
    Column-wise argmin over candidate rows, ties go to the smallest candidate.

    :param candidates: A k x n array of non-negative candidates.
    :type candidates: numpy.ndarray
    :param values: The k x n subproblem values.
    :type values: numpy.ndarray
    :rtype: numpy.ndarray
    """
    best = values.min(axis=0)
    tied = values <= best + TIE_TOL

    return np.where(tied, candidates, np.inf).min(axis=0)


class Regularizer(object):
    """
    Base class of the separable regularizers.

    A regularizer may be bound to a dimension, which
    lipschitz() needs to report a constant.
    """
    kind = None

    def __init__(self, dimension=None):
        if dimension is not None and (int(dimension) != dimension or dimension < 1):
            raise InvalidArgumentError(f'dimension must be a positive integer, got {dimension}.')

        self._dimension = None if dimension is None else int(dimension)

    @property
    def dimension(self):
        """
        The bound dimension, or None.

        :rtype: int | None
        """
        return self._dimension

    def scalar_values(self, x):
        """
        Elementwise g_i(x_i).

        :rtype: numpy.ndarray
        """
        raise NotImplementedError

    def derivative(self, x):
        """
        Elementwise g_i'(x_i), NaN where g_i is not differentiable.

        :rtype: numpy.ndarray
        """
        raise NotImplementedError

    def prox_point(self, lam, w):
        """
        An element of prox_{lam g}(w). Not counted.

        :rtype: numpy.ndarray
        """
        raise NotImplementedError

    def coordinate_lipschitz(self):
        """
        The Lipschitz constant of one coordinate function g_i.

        :rtype: float
        """
        raise NotImplementedError

    def value(self, w):
        """
        g(w) as the sum of the coordinate values.

        :rtype: float
        """
        return float(np.sum(self.scalar_values(as_vector(w, self._dimension))))

    def lipschitz(self, dimension=None):
        """
        The Lipschitz constant of g over the given dimension.

        :param dimension: Defaults to the bound dimension.
        :type dimension: int | None
        :rtype: float
        """
        dimension = self._resolve_dimension(dimension)
        return self.coordinate_lipschitz() * np.sqrt(dimension)

    def _resolve_dimension(self, dimension):
        if dimension is None:
            dimension = self._dimension

        if dimension is None:
            raise InvalidArgumentError(f'{self.kind} regularizer is not bound to '
                                       f'a dimension, pass one explicitly.')

        return int(dimension)


class ZeroRegularizer(Regularizer):
    """
    g(w) = 0.
    """
    kind = 'zero'

    def scalar_values(self, x):
        return np.zeros_like(as_vector(x))

    def derivative(self, x):
        return np.zeros_like(as_vector(x))

    def prox_point(self, lam, w):
        return as_vector(w).copy()

    def coordinate_lipschitz(self):
        return 0.0

    def lipschitz(self, dimension=None):
        return 0.0

    def __repr__(self):
        return 'ZeroRegularizer()'


class Mcp(Regularizer):
    """
    The minimax concave penalty.
    """
    kind = 'mcp'

    def __init__(self, kappa, nu, dimension=None):
        super().__init__(dimension)
        self._params = McpParams(kappa, nu)

    @classmethod
    def from_params(cls, params, dimension=None):
        return cls(params.kappa, params.nu, dimension)

    @property
    def params(self):
        return self._params

    def scalar_values(self, x):
        kappa, nu = self._params.kappa, self._params.nu
        a = np.abs(as_vector(x))

        return np.where(a <= nu * kappa, kappa * a - a * a / (2.0 * nu), nu * kappa ** 2 / 2.0)

    def derivative(self, x):
        kappa, nu = self._params.kappa, self._params.nu
        x = as_vector(x)
        a = np.abs(x)

        slope = np.where(a < nu * kappa, np.sign(x) * (kappa - a / nu), 0.0)
        return np.where(x == 0.0, np.nan, slope)

    def coordinate_lipschitz(self):
        return self._params.kappa

    def prox_point(self, lam, w):
        kappa, nu = self._params.kappa, self._params.nu
        w = as_vector(w)
        a = np.abs(w)
        top = nu * kappa

        rows = [np.zeros_like(a), np.full_like(a, top), np.maximum(a, top)]
        if lam < nu:
            # the concave part is beaten by the quadratic, one interior minimizer
            rows.append(np.clip((a - lam * kappa) / (1.0 - lam / nu), 0.0, top))

        candidates = np.vstack(rows)
        values = (candidates - a) ** 2 / (2.0 * lam) + self.scalar_values(candidates.ravel()).reshape(candidates.shape)

        return np.sign(w) * _lowest(candidates, values)

    def __repr__(self):
        return f'Mcp(kappa={self._params.kappa}, nu={self._params.nu})'


class Scad(Regularizer):
    """
    The smoothly clipped absolute deviation penalty.
    """
    kind = 'scad'

    def __init__(self, kappa, nu, dimension=None):
        super().__init__(dimension)
        self._params = ScadParams(kappa, nu)

    @classmethod
    def from_params(cls, params, dimension=None):
        return cls(params.kappa, params.nu, dimension)

    @property
    def params(self):
        return self._params

    def scalar_values(self, x):
        kappa, nu = self._params.kappa, self._params.nu
        a = np.abs(as_vector(x))

        middle = (-a * a + 2.0 * nu * kappa * a - kappa ** 2) / (2.0 * (nu - 1.0))
        return np.where(a <= kappa, kappa * a,
                        np.where(a <= nu * kappa, middle, (nu + 1.0) * kappa ** 2 / 2.0))

    def derivative(self, x):
        kappa, nu = self._params.kappa, self._params.nu
        x = as_vector(x)
        a = np.abs(x)

        slope = np.where(a <= kappa, kappa,
                         np.where(a <= nu * kappa, (nu * kappa - a) / (nu - 1.0), 0.0))
        return np.where(x == 0.0, np.nan, np.sign(x) * slope)

    def coordinate_lipschitz(self):
        return self._params.kappa

    def prox_point(self, lam, w):
        kappa, nu = self._params.kappa, self._params.nu
        w = as_vector(w)
        a = np.abs(w)
        top = nu * kappa

        rows = [
            np.zeros_like(a),
            np.full_like(a, kappa),
            np.full_like(a, top),
            np.clip(a - lam * kappa, 0.0, kappa),
            np.maximum(a, top)
        ]
        if lam < nu - 1.0:
            # the middle piece is strictly convex only in this regime
            rows.append(np.clip(((nu - 1.0) * a - lam * nu * kappa) / (nu - 1.0 - lam), kappa, top))

        candidates = np.vstack(rows)
        values = (candidates - a) ** 2 / (2.0 * lam) + self.scalar_values(candidates.ravel()).reshape(candidates.shape)

        return np.sign(w) * _lowest(candidates, values)

    def __repr__(self):
        return f'Scad(kappa={self._params.kappa}, nu={self._params.nu})'


class BlockComposite(Regularizer):
    """
    g(w) = g^1(w[block 1]) + g^2(w[block 2]) + ...

    The blocks must tile the variable without gaps or overlap.
    """
    kind = 'block'

    def __init__(self, blocks):
        """
        :param blocks: A list of (offset, length, regularizer).
        :type blocks: list
        """
        blocks = sorted(((int(o), int(n), r) for o, n, r in blocks), key=lambda b: b[0])
        if not blocks:
            raise InvalidArgumentError('a block composite needs at least one block.')

        position = 0
        for offset, length, reg in blocks:
            if offset != position or length < 1:
                raise InvalidArgumentError(f'blocks must tile the variable, '
                                           f'block at {offset} (length {length}) '
                                           f'does not start at {position}.')
            if reg.dimension is not None and reg.dimension != length:
                raise InvalidArgumentError(f'block at {offset} has length {length}, '
                                           f'its regularizer is bound to {reg.dimension}.')
            position += length

        super().__init__(position)
        self._blocks = blocks

    @property
    def blocks(self):
        return list(self._blocks)

    def _split(self, w):
        for offset, length, reg in self._blocks:
            yield reg, w[offset:offset + length]

    def scalar_values(self, x):
        x = as_vector(x, self._dimension)
        return np.concatenate([reg.scalar_values(part) for reg, part in self._split(x)])

    def derivative(self, x):
        x = as_vector(x, self._dimension)
        return np.concatenate([reg.derivative(part) for reg, part in self._split(x)])

    def prox_point(self, lam, w):
        w = as_vector(w, self._dimension)
        return np.concatenate([reg.prox_point(lam, part) for reg, part in self._split(w)])

    def coordinate_lipschitz(self):
        return max(reg.coordinate_lipschitz() for _, _, reg in self._blocks)

    def lipschitz(self, dimension=None):
        # disjoint blocks combine in the Euclidean norm
        if dimension is not None and dimension != self._dimension:
            raise InvalidArgumentError(f'block composite has dimension {self._dimension}.')

        return float(np.sqrt(sum(reg.lipschitz(length) ** 2
                                 for _, length, reg in self._blocks)))

    def __repr__(self):
        parts = ', '.join(f'{o}:{o + n}={r}' for o, n, r in self._blocks)
        return f'BlockComposite({parts})'


def build_regularizer(kind, dimension=None, **params):
    """
    Create a regularizer from its kind and parameters.

    :param kind: `mcp`, `scad` or `zero`.
    :type kind: str
    :param dimension: Optional dimension to bind to.
    :type dimension: int | None
    :param params: kappa and nu for mcp and scad.
    :rtype: Regularizer
    """
    kind = kind.lower()
    if kind == 'mcp':
        return Mcp(params['kappa'], params['nu'], dimension)
    elif kind == 'scad':
        return Scad(params['kappa'], params['nu'], dimension)
    elif kind == 'zero':
        return ZeroRegularizer(dimension)

    raise InvalidArgumentError(f'unknown regularizer kind `{kind}`.')


def regularizer_from_params(params, dimension=None):
    """
    Create an MCP or SCAD regularizer from a params object.

    :param params: The parameters.
    :type params: McpParams | ScadParams | None
    :rtype: Regularizer
    """
    if params is None:
        return ZeroRegularizer(dimension)
    elif isinstance(params, McpParams):
        return Mcp.from_params(params, dimension)
    elif isinstance(params, ScadParams):
        return Scad.from_params(params, dimension)
    elif isinstance(params, Regularizer):
        return params

    raise InvalidArgumentError(f'unsupported regularizer params {params!r}.')


def reg_value(reg, w):
    """
    g(w).

    :param reg: The regularizer.
    :type reg: Regularizer
    :param w: The point.
    :type w: array_like
    :rtype: float
    """
    return reg.value(w)


def prox(reg, lam, w, counters=None):
    """
    A point of prox_{lam g}(w) and the Moreau envelope value.

    The envelope is recomputed from the returned point, so
    the two can never disagree.

    :param reg: The regularizer.
    :type reg: Regularizer
    :param lam: lambda > 0
    :type lam: float
    :param w: The point.
    :type w: array_like
    :param counters: Counted as one prox_g operation.
    :type counters: OpCounters | None
    :rtype: ProxResult
    """
    lam = check_positive(lam, 'lambda')
    w = as_vector(w, reg.dimension)

    zeta = reg.prox_point(lam, w)
    envelope = float(np.sum((w - zeta) ** 2)) / (2.0 * lam) + reg.value(zeta)

    if counters is not None:
        counters.add_prox_g()

    return ProxResult(zeta, envelope)


def moreau_envelope(reg, lam, w, counters=None):
    """
    e_{lam g}(w) = min_x ||w - x||^2/(2 lam) + g(x).

    :rtype: float
    """
    return prox(reg, lam, w, counters).envelope_value


def reg_lipschitz(reg, dimension=None):
    """
    The Lipschitz constant of g.

    An unbound regularizer without a dimension reports the constant of
    a single coordinate.

    :param reg: The regularizer.
    :type reg: Regularizer
    :param dimension: Overrides the bound dimension.
    :type dimension: int | None
    :rtype: float
    """
    if dimension is None and reg.dimension is None:
        return float(reg.coordinate_lipschitz())

    return float(reg.lipschitz(dimension))
