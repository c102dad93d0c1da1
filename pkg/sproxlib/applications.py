# -*- coding: utf-8 -*-

"""
Problem builders for the sparse non-negative PCA, fair classification
and portfolio problems, plus a scaled quadratic used for testing.

Every builder returns a CompositeProblem whose smooth part is a
FiniteSumOracle with analytic component gradients and a declared
per-component gradient Lipschitz constant.

Licensed under the MIT License, see LICENSE.
"""

import logging

import numpy as np
from scipy import sparse

from .data.dataset import DatasetMatrix
from .errors import InvalidArgumentError
from .problem import CompositeProblem, FiniteSumOracle, SmoothnessInfo
from .projections import FreeSet, HalfspacePair, NonnegBall, Simplex
from .regularizers import (DEFAULT_SCAD_NU, BlockComposite, Mcp, Scad, ZeroRegularizer,
                           regularizer_from_params)
from .utils import as_vector, check_positive, column_sq_norms, dense_columns

log = logging.getLogger(__name__)

# Used as L when the data is all zero, any positive bound is valid then.
MIN_LIPSCHITZ = 1e-12


def smoothed01_loss(u):
    """
    Smoothed 0-1 loss.

    1 for u < -1, u^3/4 - 3u/4 + 1/2 on [-1, 1] and 0 for u > 1.

    :param u: The margin(s).
    :type u: float | numpy.ndarray
    :rtype: float | numpy.ndarray
    """
    u = np.asarray(u, dtype=np.float64)
    c = np.clip(u, -1.0, 1.0)
    value = 0.25 * c ** 3 - 0.75 * c + 0.5

    return value if value.ndim else float(value)


def smoothed01_derivative(u):
    """
    Derivative of smoothed01_loss, 3u^2/4 - 3/4 inside [-1, 1] and 0 outside.

    :rtype: float | numpy.ndarray
    """
    u = np.asarray(u, dtype=np.float64)
    slope = np.where(np.abs(u) <= 1.0, 0.75 * u * u - 0.75, 0.0)

    return slope if slope.ndim else float(slope)


def exp_utility(u, psi1, psi2):
    """
    Piecewise exponential utility.

    (1 - exp(-psi1 u))/psi1 for u >= 0 and (exp(psi2 u) - 1)/psi2 for u < 0.

    :param u: The portfolio return(s).
    :type u: float | numpy.ndarray
    :param psi1: Risk aversion on gains, > 0.
    :type psi1: float
    :param psi2: Risk aversion on losses, > 0.
    :type psi2: float
    :rtype: float | numpy.ndarray
    """
    psi1 = check_positive(psi1, 'psi1')
    psi2 = check_positive(psi2, 'psi2')
    u = np.asarray(u, dtype=np.float64)

    gains = -np.expm1(-psi1 * np.maximum(u, 0.0)) / psi1
    losses = np.expm1(psi2 * np.minimum(u, 0.0)) / psi2
    value = np.where(u >= 0.0, gains, losses)

    return value if value.ndim else float(value)


def exp_utility_derivative(u, psi1, psi2):
    """
    Derivative of exp_utility, exp(-psi1 u) for u >= 0 and exp(psi2 u) below.

    :rtype: float | numpy.ndarray
    """
    psi1 = check_positive(psi1, 'psi1')
    psi2 = check_positive(psi2, 'psi2')
    u = np.asarray(u, dtype=np.float64)

    slope = np.where(u >= 0.0, np.exp(-psi1 * np.maximum(u, 0.0)),
                     np.exp(psi2 * np.minimum(u, 0.0)))

    return slope if slope.ndim else float(slope)


def _sample_matrix(data, name):
    """
    The d x n sample matrix of a DatasetMatrix or an array.

    :rtype: numpy.ndarray | scipy.sparse.csc_matrix
    """
    if not isinstance(data, DatasetMatrix):
        data = DatasetMatrix(data)

    if data.count == 0 or data.dimension == 0:
        raise InvalidArgumentError(f'{name} is empty.')

    return data.samples


def _lipschitz(value):
    if value <= 0.0:
        log.debug(f'data is all zero, using L = {MIN_LIPSCHITZ}')
        return MIN_LIPSCHITZ

    return float(value)


class LinearModelOracle(FiniteSumOracle):
    """
    f_j(w) = phi(w' x_j) for a scalar function phi and sample columns x_j.
    """
    def __init__(self, samples):
        super().__init__(samples.shape[0], samples.shape[1])
        self._samples = samples

    @property
    def samples(self):
        return self._samples

    def _scalar(self, u):
        raise NotImplementedError

    def _scalar_derivative(self, u):
        raise NotImplementedError

    def _margins(self, w):
        return np.asarray(self._samples.T @ w).ravel()

    def value(self, w):
        w = as_vector(w, self._dimension)
        return float(np.mean(self._scalar(self._margins(w))))

    def _component_gradients(self, indices, w):
        cols = dense_columns(self._samples, indices)
        return cols * self._scalar_derivative(cols.T @ w)

    def _full_gradient(self, w):
        slopes = self._scalar_derivative(self._margins(w))
        return np.asarray(self._samples @ slopes).ravel() / self._component_count


class PcaOracle(LinearModelOracle):
    """
    f(w) = -(1/2n) sum_j (w' x_j)^2.
    """
    def _scalar(self, u):
        return -0.5 * u * u

    def _scalar_derivative(self, u):
        return -u


class PortfolioOracle(LinearModelOracle):
    """
    f(w) = -(1/n) sum_j U(w' r_j), the negated mean utility.
    """
    def __init__(self, returns, psi1, psi2):
        super().__init__(returns)
        self._psi1 = check_positive(psi1, 'psi1')
        self._psi2 = check_positive(psi2, 'psi2')

    @property
    def psi1(self):
        return self._psi1

    @property
    def psi2(self):
        return self._psi2

    def _scalar(self, u):
        return -exp_utility(u, self._psi1, self._psi2)

    def _scalar_derivative(self, u):
        return -exp_utility_derivative(u, self._psi1, self._psi2)


class FairClassificationOracle(FiniteSumOracle):
    """
    f(v, z) = (1/n) sum_j loss(y_j (v' x_j + z_j)).

    The variable is (v, z) with v over the non-sensitive features and one
    mean-shift z_j per sample. The gradient of f_j touches z only at j.
    """
    def __init__(self, features, labels, objective_lipschitz=None):
        """
        :param features: The p x n matrix of non-sensitive features.
        :type features: numpy.ndarray | scipy.sparse.csc_matrix
        :param labels: The labels, +1 or -1.
        :type labels: numpy.ndarray
        :param objective_lipschitz: Gradient Lipschitz constant of the mean f.
        :type objective_lipschitz: float | None
        """
        p, n = features.shape
        super().__init__(p + n, n)
        self._features = features
        self._labels = labels
        self._p = p
        self._objective_lipschitz = objective_lipschitz

    @property
    def features(self):
        return self._features

    @property
    def labels(self):
        return self._labels

    @property
    def objective_lipschitz(self):
        return self._objective_lipschitz

    @property
    def feature_count(self):
        """
        The length p of the v block.

        :rtype: int
        """
        return self._p

    def split(self, w):
        """
        Split a variable into its (v, z) blocks.

        :rtype: tuple
        """
        w = as_vector(w, self._dimension)
        return w[:self._p], w[self._p:]

    def _margins(self, w):
        v, z = self.split(w)
        return self._labels * (np.asarray(self._features.T @ v).ravel() + z)

    def value(self, w):
        return float(np.mean(smoothed01_loss(self._margins(w))))

    def _component_gradients(self, indices, w):
        v, z = self.split(w)
        cols = dense_columns(self._features, indices)
        y = self._labels[indices]
        scale = smoothed01_derivative(y * (cols.T @ v + z[indices])) * y

        grads = np.zeros((self._dimension, indices.shape[0]))
        grads[:self._p] = cols * scale
        grads[self._p + indices, np.arange(indices.shape[0])] = scale

        return grads

    def _mean_gradient(self, indices, w):
        # avoids the dense (p + n) x k matrix, z is touched once per draw
        v, z = self.split(w)
        cols = dense_columns(self._features, indices)
        y = self._labels[indices]
        scale = smoothed01_derivative(y * (cols.T @ v + z[indices])) * y

        grad = np.zeros(self._dimension)
        grad[:self._p] = cols @ scale
        np.add.at(grad, self._p + indices, scale)

        return grad / indices.shape[0]

    def _full_gradient(self, w):
        scale = smoothed01_derivative(self._margins(w)) * self._labels
        grad_v = np.asarray(self._features @ scale).ravel()

        return np.concatenate([grad_v, scale]) / self._component_count


class QuadraticOracle(FiniteSumOracle):
    """
    f_j(w) = a_j ||w||^2 / 2.
    """
    def __init__(self, scales, dimension):
        scales = as_vector(scales, name='scales')
        super().__init__(dimension, scales.shape[0])
        self._scales = scales

    @property
    def scales(self):
        return self._scales.copy()

    def value(self, w):
        w = as_vector(w, self._dimension)
        return 0.5 * float(self._scales.mean()) * float(w @ w)

    def _component_gradients(self, indices, w):
        return np.outer(w, self._scales[indices])

    def _full_gradient(self, w):
        return float(self._scales.mean()) * w


class PcaProblem(CompositeProblem):
    """
    Sparse non-negative PCA, min -(1/2n) sum_j (w' x_j)^2 + g(w) over
    the non-negative part of the unit ball.
    """
    def explained_variance(self, w):
        """
        (1/n) sum_j (w' x_j)^2, the variance along w.

        :rtype: float
        """
        return -2.0 * self.smooth.value(w)


class FairClassificationProblem(CompositeProblem):
    """
    Classification with a mean-shift outlier variable per sample and a
    cap on the covariance between the decision value and the sensitive
    attribute.
    """
    def outliers(self, w):
        """
        Samples flagged as outliers, those with a nonzero mean shift.

        :param w: The variable (v, z).
        :type w: array_like
        :return: 0-based sample indices.
        :rtype: numpy.ndarray
        """
        _, z = self.smooth.split(w)
        return np.flatnonzero(z)

    def decision_values(self, w):
        """
        v' x_j for every sample.

        :rtype: numpy.ndarray
        """
        v, _ = self.smooth.split(w)
        return np.asarray(self.smooth.features.T @ v).ravel()


class PortfolioProblem(CompositeProblem):
    """
    Long-only portfolio selection maximizing the mean utility of the
    observed returns, recast as minimizing its negation.
    """
    def utility(self, w):
        """
        (1/n) sum_j U(w' r_j).

        :rtype: float
        """
        return -self.smooth.value(w)


def build_pca(data, reg_params=None, radius=1.0, name='pca'):
    """
    Build the sparse non-negative PCA problem.

    :param data: The d x n samples, columns are samples.
    :type data: DatasetMatrix | numpy.ndarray | scipy.sparse.spmatrix
    :param reg_params: McpParams, ScadParams or a Regularizer,
    defaults to MCP with kappa = 1/d and nu = 1.
    :param radius: Radius of the ball constraint.
    :type radius: float
    :param name: The problem name.
    :type name: str
    :rtype: PcaProblem
    """
    samples = _sample_matrix(data, 'PCA data')
    d = samples.shape[0]

    if reg_params is None:
        regularizer = Mcp(1.0 / d, 1.0, d)
    else:
        regularizer = regularizer_from_params(reg_params, d)

    L = _lipschitz(column_sq_norms(samples).max())
    log.info(f'PCA problem d={d}, n={samples.shape[1]}, L={L}')

    return PcaProblem(PcaOracle(samples), regularizer, NonnegBall(radius, d),
                      SmoothnessInfo(L), name)


def fairness_direction(features, sensitive_index):
    """
    x_hat = (1/n) sum_j (x_a^j - mean(x_a)) x_{-a}^j.

    :param features: The d' x n feature matrix, sensitive row included.
    :type features: numpy.ndarray | scipy.sparse.spmatrix
    :param sensitive_index: Row of the sensitive attribute.
    :type sensitive_index: int
    :return: x_hat and the d'-1 x n matrix of the other features.
    :rtype: tuple
    """
    rows = features.shape[0]
    if not 0 <= sensitive_index < rows:
        raise InvalidArgumentError(f'sensitive_index {sensitive_index} is out of range 0..{rows - 1}.')

    keep = [i for i in range(rows) if i != sensitive_index]
    if not keep:
        raise InvalidArgumentError('no features left besides the sensitive attribute.')

    others = features[keep, :]
    attribute = features[sensitive_index, :]
    if sparse.issparse(attribute):
        attribute = attribute.toarray()
        others = sparse.csc_matrix(others)
    attribute = np.asarray(attribute, dtype=np.float64).ravel()

    centered = attribute - attribute.mean()
    x_hat = np.asarray(others @ centered).ravel() / features.shape[1]

    return x_hat, others


def build_fair_classification(features, labels, sensitive_index, c, g1=None, g2=None,
                              name='fair_classification'):
    """
    Build the fair classification problem.

    :param features: The d' x n features, columns are samples.
    :type features: DatasetMatrix | numpy.ndarray | scipy.sparse.spmatrix
    :param labels: The labels, +1 or -1. Taken from the dataset when None.
    :type labels: array_like | None
    :param sensitive_index: Row of the sensitive attribute.
    :type sensitive_index: int
    :param c: The covariance cap, > 0.
    :type c: float
    :param g1: Regularizer params of v, defaults to MCP with kappa = 1/p, nu = 1.
    :param g2: Regularizer params of z, defaults to SCAD with kappa = 1/n, nu = 3.7.
    :param name: The problem name.
    :type name: str
    :rtype: FairClassificationProblem
    """
    if labels is None and isinstance(features, DatasetMatrix):
        labels = features.labels

    if labels is None:
        raise InvalidArgumentError('fair classification needs labels.')

    x = _sample_matrix(features, 'fair classification features')
    n = x.shape[1]
    labels = as_vector(labels, n, 'labels')
    if not np.all(np.abs(labels) == 1.0):
        raise InvalidArgumentError('labels must be +1 or -1.')

    c = check_positive(c, 'covariance cap c')
    x_hat, others = fairness_direction(x, int(sensitive_index))
    p = others.shape[0]

    v_reg = Mcp(1.0 / p, 1.0, p) if g1 is None else regularizer_from_params(g1, p)
    z_reg = Scad(1.0 / n, DEFAULT_SCAD_NU, n) if g2 is None else regularizer_from_params(g2, n)
    regularizer = BlockComposite([(0, p, v_reg), (p, n, z_reg)])

    if not np.any(x_hat):
        log.warning('x_hat is zero, the fairness constraint is vacuous and is dropped.')
        constraint = FreeSet(p + n)
    else:
        constraint = HalfspacePair(x_hat, c, p + n)

    # the smoothed loss has |loss''| <= 3/2
    sq_norms = column_sq_norms(others) + 1.0
    L = 1.5 * float(sq_norms.max())
    oracle = FairClassificationOracle(others, labels, 1.5 * float(sq_norms.mean()))

    log.info(f'fair classification problem p={p}, n={n}, L={L}')

    return FairClassificationProblem(oracle, regularizer, constraint, SmoothnessInfo(L), name)


def build_portfolio(returns, psi1, psi2, reg_params=None, total=1.0, name='portfolio'):
    """
    Build the portfolio problem over {w >= 0, sum(w) <= total}.

    :param returns: The d x n returns, column j is observation r_j.
    :type returns: DatasetMatrix | numpy.ndarray | scipy.sparse.spmatrix
    :param psi1: Risk aversion on gains, > 0.
    :type psi1: float
    :param psi2: Risk aversion on losses, > 0.
    :type psi2: float
    :param reg_params: Optional regularizer params, defaults to none.
    :param total: The budget, defaults to 1.
    :type total: float
    :param name: The problem name.
    :type name: str
    :rtype: PortfolioProblem
    """
    r = _sample_matrix(returns, 'returns')
    d = r.shape[0]
    oracle = PortfolioOracle(r, psi1, psi2)

    regularizer = ZeroRegularizer(d) if reg_params is None else regularizer_from_params(reg_params, d)
    L = _lipschitz(max(oracle.psi1, oracle.psi2) * column_sq_norms(r).max())
    log.info(f'portfolio problem d={d}, n={r.shape[1]}, L={L}')

    return PortfolioProblem(oracle, regularizer, Simplex(total, augmented=True, dimension=d),
                            SmoothnessInfo(L), name)


def build_quadratic(scales, dimension, name='quadratic'):
    """
    Build f(w) = (1/n) sum_j a_j ||w||^2 / 2 with no regularizer or constraint.

    :param scales: The positive scales a_j.
    :type scales: array_like
    :param dimension: The dimension d.
    :type dimension: int
    :param name: The problem name.
    :type name: str
    :rtype: CompositeProblem
    """
    scales = as_vector(scales, name='scales')
    if scales.size == 0 or np.any(scales <= 0.0):
        raise InvalidArgumentError('scales must be a non-empty vector of positive numbers.')

    oracle = QuadraticOracle(scales, dimension)
    return CompositeProblem(oracle, ZeroRegularizer(dimension), FreeSet(dimension),
                            SmoothnessInfo(float(scales.max())), name)
