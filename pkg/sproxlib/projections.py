# -*- coding: utf-8 -*-

"""
Convex constraint sets C, with h the indicator of C.

The prox of an indicator is the Euclidean projection onto the set,
which is what every constraint implements here.

Licensed under the MIT License, see LICENSE.
"""

import logging

import numpy as np

from .errors import InvalidArgumentError
from .utils import as_vector, check_positive

log = logging.getLogger(__name__)


def project_simplex(v, total=1.0):
    """
    Project onto {w : w >= 0, sum(w) = total} by sort and threshold.

    :param v: The point.
    :type v: numpy.ndarray
    :param total: The simplex total, > 0.
    :type total: float
    :rtype: numpy.ndarray
    """
    u = np.sort(v)[::-1]
    excess = np.cumsum(u) - total
    ranks = np.arange(1, v.shape[0] + 1)

    # the number of positive entries of the projection
    rho = np.nonzero(u - excess / ranks > 0)[0][-1]
    threshold = excess[rho] / (rho + 1.0)

    return np.maximum(v - threshold, 0.0)


class Constraint(object):
    """
    Base class of the constraint sets.

    A constraint may be bound to a dimension, None accepts any.
    """
    kind = None

    def __init__(self, dimension=None):
        if dimension is not None and (int(dimension) != dimension or dimension < 1):
            raise InvalidArgumentError(f'dimension must be a positive integer, got {dimension}.')

        self._dimension = None if dimension is None else int(dimension)

    @property
    def dimension(self):
        return self._dimension

    def _project(self, w):
        raise NotImplementedError

    def _violation(self, w):
        """
        The largest violation of any defining inequality.

        :rtype: float
        """
        raise NotImplementedError

    def project(self, w):
        """
        The nearest point of the set. Not counted.

        :param w: The point.
        :type w: array_like
        :rtype: numpy.ndarray
        """
        return self._project(as_vector(w, self._dimension))

    def is_feasible(self, w, tol=0.0):
        """
        True if w violates no defining inequality by more than tol.

        :param w: The point.
        :type w: array_like
        :param tol: Allowed violation, >= 0.
        :type tol: float
        :rtype: bool
        """
        if tol < 0:
            raise InvalidArgumentError(f'tol must be >= 0, got {tol}.')

        return bool(self._violation(as_vector(w, self._dimension)) <= tol)

    def indicator(self, w, tol=0.0):
        """
        h(w), 0 on the set and inf outside.

        :rtype: float
        """
        return 0.0 if self.is_feasible(w, tol) else np.inf


class FreeSet(Constraint):
    """
    No constraint, C = R^d.
    """
    kind = 'free'

    def _project(self, w):
        return w.copy()

    def _violation(self, w):
        return 0.0

    def __repr__(self):
        return 'FreeSet()'


class Simplex(Constraint):
    """
    The simplex {w >= 0, sum(w) = total}.

    With augmented=True the set is {w >= 0, sum(w) <= total}, the simplex
    over (w, w_{d+1}) with the slack w_{d+1} = total - sum(w) kept implicit.
    """
    kind = 'simplex'

    def __init__(self, total=1.0, augmented=False, dimension=None):
        super().__init__(dimension)
        self._total = check_positive(total, 'simplex total')
        self._augmented = bool(augmented)

    @property
    def total(self):
        return self._total

    @property
    def augmented(self):
        return self._augmented

    def _project(self, w):
        if self._augmented:
            clipped = np.maximum(w, 0.0)
            if clipped.sum() <= self._total:
                return clipped

        return project_simplex(w, self._total)

    def _violation(self, w):
        negative = max(0.0, -float(w.min()))
        excess = float(w.sum()) - self._total
        if self._augmented:
            return max(negative, excess)

        return max(negative, abs(excess))

    def __repr__(self):
        return f'Simplex(total={self._total}, augmented={self._augmented})'


class HalfspacePair(Constraint):
    """
    The slab {w : |x_hat' w| <= c}.

    When bound to a dimension larger than len(x_hat), x_hat covers the
    leading block and the trailing coordinates are unconstrained.
    """
    kind = 'halfspace_pair'

    def __init__(self, x_hat, c, dimension=None):
        x_hat = as_vector(x_hat, name='x_hat')
        if dimension is not None:
            if dimension < x_hat.shape[0]:
                raise InvalidArgumentError(f'x_hat has length {x_hat.shape[0]}, '
                                           f'longer than dimension {dimension}.')
            x_hat = np.concatenate([x_hat, np.zeros(int(dimension) - x_hat.shape[0])])
        else:
            dimension = x_hat.shape[0]

        super().__init__(dimension)

        self._sq_norm = float(x_hat @ x_hat)
        if self._sq_norm == 0.0:
            raise InvalidArgumentError('x_hat is zero, the projection is undefined.')

        # c > 0 means both halfspaces can never be violated at once
        self._c = check_positive(c, 'covariance cap c')
        self._x_hat = x_hat

    @property
    def x_hat(self):
        return self._x_hat.copy()

    @property
    def c(self):
        return self._c

    def _project(self, w):
        t = float(self._x_hat @ w)
        if t > self._c:
            return w - ((t - self._c) / self._sq_norm) * self._x_hat
        elif -t > self._c:
            return w - ((t + self._c) / self._sq_norm) * self._x_hat

        return w.copy()

    def _violation(self, w):
        return abs(float(self._x_hat @ w)) - self._c

    def __repr__(self):
        return f'HalfspacePair(c={self._c}, |x_hat|={np.sqrt(self._sq_norm):.4g})'


class NonnegBall(Constraint):
    """
    The non-negative part of the ball {w >= 0, ||w||_2 <= radius}.
    """
    kind = 'nonneg_ball'

    def __init__(self, radius=1.0, dimension=None):
        super().__init__(dimension)
        self._radius = check_positive(radius, 'ball radius')

    @property
    def radius(self):
        return self._radius

    def _project(self, w):
        clipped = np.maximum(w, 0.0)
        return clipped / max(np.linalg.norm(clipped) / self._radius, 1.0)

    def _violation(self, w):
        negative = max(0.0, -float(w.min()))
        return max(negative, float(np.linalg.norm(w)) - self._radius)

    def __repr__(self):
        return f'NonnegBall(radius={self._radius})'


def project(constraint, w, counters=None):
    """
    The Euclidean projection of w onto the constraint set.

    :param constraint: The constraint set.
    :type constraint: Constraint
    :param w: The point.
    :type w: array_like
    :param counters: Counted as one prox_h operation.
    :type counters: OpCounters | None
    :rtype: numpy.ndarray
    """
    point = constraint.project(w)
    if counters is not None:
        counters.add_prox_h()

    return point


def is_feasible(constraint, w, tol=0.0):
    """
    True if w lies in the constraint set up to tol.

    :rtype: bool
    """
    return constraint.is_feasible(w, tol)


def build_constraint(kind, dimension=None, **params):
    """
    Create a constraint from its kind and parameters.

    :param kind: `free`, `simplex`, `halfspace_pair` or `nonneg_ball`.
    :type kind: str
    :param dimension: Optional dimension to bind to.
    :type dimension: int | None
    :rtype: Constraint
    """
    kind = kind.lower()
    if kind == 'free':
        return FreeSet(dimension)
    elif kind == 'simplex':
        return Simplex(params.get('total', 1.0), params.get('augmented', False), dimension)
    elif kind == 'halfspace_pair':
        return HalfspacePair(params['x_hat'], params['c'], dimension)
    elif kind == 'nonneg_ball':
        return NonnegBall(params.get('radius', 1.0), dimension)

    raise InvalidArgumentError(f'unknown constraint kind `{kind}`.')
