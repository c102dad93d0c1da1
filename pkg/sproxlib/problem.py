# -*- coding: utf-8 -*-

"""
The composite problem Phi(w) = f(w) + g(w) + h(w) and the smooth oracle contract.

f is reached through an oracle, either a finite sum (1/n) sum_j f_j(w)
or a general expectation E[F(w, xi)] that can only be sampled.
Every oracle method that counts takes an optional OpCounters, so
the problem itself stays immutable and can be shared between runs.

Licensed under the MIT License, see LICENSE.
"""

import logging

import numpy as np

from .errors import InvalidArgumentError
from .utils import as_vector, check_positive, make_rng

log = logging.getLogger(__name__)

# component_count of an oracle that can only be sampled.
GENERAL = 'general'

# Feasibility slack used when evaluating the indicator h.
FEASIBILITY_TOL = 1e-10

# Columns per chunk when averaging many component gradients.
CHUNK_SIZE = 4096

# Starting points, see CompositeProblem.start_point.
START_KINDS = ('zeros', 'uniform', 'random')


class SmoothnessInfo(object):
    """
    Smoothness and variance metadata of f.
    """
    def __init__(self, lipschitz_L, variance_sigma_sq=None):
        """
        :param lipschitz_L: Gradient Lipschitz constant of f, and of
        every f_j in finite-sum mode.
        :type lipschitz_L: float
        :param variance_sigma_sq: Bound on E||grad F - grad f||^2, None if unknown.
        :type variance_sigma_sq: float | None
        """
        self._lipschitz_L = check_positive(lipschitz_L, 'lipschitz_L')

        if variance_sigma_sq is not None:
            if variance_sigma_sq < 0:
                raise InvalidArgumentError(f'variance_sigma_sq must be >= 0, '
                                           f'got {variance_sigma_sq}.')
            variance_sigma_sq = float(variance_sigma_sq)

        self._variance_sigma_sq = variance_sigma_sq

    @property
    def lipschitz_L(self):
        return self._lipschitz_L

    @property
    def variance_sigma_sq(self):
        return self._variance_sigma_sq

    def __repr__(self):
        return f'SmoothnessInfo(L={self._lipschitz_L}, sigma_sq={self._variance_sigma_sq})'


class SmoothOracle(object):
    """
    Base class of the smooth function oracles.
    """
    def __init__(self, dimension, component_count):
        if int(dimension) != dimension or dimension < 1:
            raise InvalidArgumentError(f'dimension must be a positive integer, got {dimension}.')

        self._dimension = int(dimension)
        self._component_count = component_count

    @property
    def dimension(self):
        """
        The dimension d of the variable.

        :rtype: int
        """
        return self._dimension

    @property
    def component_count(self):
        """
        n for a finite sum, or GENERAL.

        :rtype: int | str
        """
        return self._component_count

    @property
    def is_finite_sum(self):
        return self._component_count != GENERAL

    def value(self, w):
        raise NotImplementedError

    def full_gradient(self, w, counters=None):
        raise NotImplementedError

    def sample_gradient(self, rng, w, counters=None):
        raise NotImplementedError


class FiniteSumOracle(SmoothOracle):
    """
    f(w) = (1/n) sum_j f_j(w).

    Subclasses implement value() and _component_gradients(), which returns
    the gradients of the given components as the columns of a d x k matrix.
    Component indices are 0-based.
    """
    def __init__(self, dimension, component_count):
        if int(component_count) != component_count or component_count < 1:
            raise InvalidArgumentError(f'component_count must be a positive integer, '
                                       f'got {component_count}.')

        super().__init__(dimension, int(component_count))

    def _component_gradients(self, indices, w):
        raise NotImplementedError

    def _full_gradient(self, w):
        """
        Uncounted mean of all component gradients.

        Subclasses with a cheaper closed form override this.
        """
        return self._mean_gradient(np.arange(self._component_count), w)

    def _mean_gradient(self, indices, w):
        # fixed order chunked sum, so the result only depends on the indices
        total = np.zeros(self._dimension)
        for start in range(0, indices.shape[0], CHUNK_SIZE):
            chunk = indices[start:start + CHUNK_SIZE]
            total += self._component_gradients(chunk, w).sum(axis=1)

        return total / indices.shape[0]

    def _check_indices(self, indices):
        indices = np.asarray(indices, dtype=np.int64).ravel()
        if indices.size == 0:
            raise InvalidArgumentError('at least one component index is needed.')

        if indices.min() < 0 or indices.max() >= self._component_count:
            raise InvalidArgumentError(f'component index out of range 0..{self._component_count - 1}.')

        return indices

    def sample_indices(self, rng, size):
        """
        Draw component indices uniformly, with replacement.

        :param rng: The run's random stream.
        :type rng: numpy.random.Generator
        :param size: The number of draws.
        :type size: int
        :rtype: numpy.ndarray
        """
        return rng.integers(0, self._component_count, size=size)

    def component_gradient(self, j, w, counters=None):
        """
        Gradient of the single component f_j.

        :param j: 0-based component index.
        :type j: int
        :param w: The point.
        :type w: numpy.ndarray
        :param counters: Counted as one gradient call.
        :type counters: OpCounters | None
        :rtype: numpy.ndarray
        """
        w = as_vector(w, self._dimension)
        indices = self._check_indices([j])
        if counters is not None:
            counters.add_gradient_calls(1)

        return self._component_gradients(indices, w)[:, 0]

    def gradient_matrix(self, indices, w, counters=None):
        """
        Gradients of the given components as columns.

        :param indices: 0-based component indices.
        :type indices: array_like
        :param w: The point.
        :type w: numpy.ndarray
        :param counters: Counted as len(indices) gradient calls.
        :type counters: OpCounters | None
        :return: A d x len(indices) matrix.
        :rtype: numpy.ndarray
        """
        w = as_vector(w, self._dimension)
        indices = self._check_indices(indices)
        if counters is not None:
            counters.add_gradient_calls(indices.shape[0])

        return self._component_gradients(indices, w)

    def batch_gradient(self, indices, w, counters=None):
        """
        Mean gradient of the given components.

        :param indices: 0-based component indices, repeats allowed.
        :type indices: array_like
        :param w: The point.
        :type w: numpy.ndarray
        :param counters: Counted as len(indices) gradient calls.
        :type counters: OpCounters | None
        :rtype: numpy.ndarray
        """
        w = as_vector(w, self._dimension)
        indices = self._check_indices(indices)
        if counters is not None:
            counters.add_gradient_calls(indices.shape[0])

        return self._mean_gradient(indices, w)

    def full_gradient(self, w, counters=None):
        """
        The exact gradient of f.

        :param w: The point.
        :type w: numpy.ndarray
        :param counters: Counted as n gradient calls.
        :type counters: OpCounters | None
        :rtype: numpy.ndarray
        """
        w = as_vector(w, self._dimension)
        if counters is not None:
            counters.add_gradient_calls(self._component_count)

        return self._full_gradient(w)

    def sample_gradient(self, rng, w, counters=None):
        """
        Gradient of one uniformly drawn component.

        :rtype: numpy.ndarray
        """
        j = int(self.sample_indices(rng, 1)[0])
        return self.component_gradient(j, w, counters)


class StochasticOracle(SmoothOracle):
    """
    f(w) = E[F(w, xi)] given by user callables.

    The exact value and gradient are only used for diagnostics and
    the objective traces, they are never counted as gradient calls.
    """
    def __init__(self, dimension, value, gradient, sample_gradient):
        """
        :param dimension: The dimension d.
        :type dimension: int
        :param value: w -> f(w)
        :type value: callable
        :param gradient: w -> grad f(w)
        :type gradient: callable
        :param sample_gradient: (rng, w) -> grad F(w, xi), xi drawn from rng.
        :type sample_gradient: callable
        """
        super().__init__(dimension, GENERAL)
        self._value = value
        self._gradient = gradient
        self._sample_gradient = sample_gradient

    def value(self, w):
        return float(self._value(as_vector(w, self._dimension)))

    def full_gradient(self, w, counters=None):
        return as_vector(self._gradient(as_vector(w, self._dimension)),
                         self._dimension, 'gradient')

    def sample_gradient(self, rng, w, counters=None):
        w = as_vector(w, self._dimension)
        if counters is not None:
            counters.add_gradient_calls(1)

        return as_vector(self._sample_gradient(rng, w), self._dimension, 'sample gradient')


class CompositeProblem(object):
    """
    Phi(w) = f(w) + g(w) + h(w).

    f is a smooth oracle, g a regularizer and h the indicator of a
    convex constraint set. The problem is immutable once built.
    """
    def __init__(self, smooth, regularizer, constraint, smoothness, name=None):
        """
        :param smooth: The oracle of f.
        :type smooth: SmoothOracle
        :param regularizer: g
        :type regularizer: sproxlib.regularizers.Regularizer
        :param constraint: The constraint set of h.
        :type constraint: sproxlib.projections.Constraint
        :param smoothness: L and sigma^2 of f.
        :type smoothness: SmoothnessInfo
        :param name: A name used in logs and file names.
        :type name: str | None
        """
        d = smooth.dimension
        for part, dim in (('regularizer', regularizer.dimension),
                          ('constraint', constraint.dimension)):
            if dim is not None and dim != d:
                raise InvalidArgumentError(f'{part} has dimension {dim}, '
                                           f'the smooth part has {d}.')

        self._smooth = smooth
        self._regularizer = regularizer
        self._constraint = constraint
        self._smoothness = smoothness
        self._name = name or 'problem'

    @property
    def smooth(self):
        return self._smooth

    @property
    def regularizer(self):
        return self._regularizer

    @property
    def constraint(self):
        return self._constraint

    @property
    def smoothness(self):
        return self._smoothness

    @property
    def name(self):
        return self._name

    @property
    def dimension(self):
        return self._smooth.dimension

    def initial_point(self):
        """
        The zero vector projected onto the constraint set.

        Not counted as a proximal operation.

        :rtype: numpy.ndarray
        """
        return self._constraint.project(np.zeros(self.dimension))

    def start_point(self, kind='zeros', seed=None):
        """
        A feasible starting point.

        zeros is initial_point(), uniform projects 1/sqrt(d) * 1 and random
        projects a seeded N(0, I/d) draw. Not counted as a proximal operation.

        :param kind: One of START_KINDS.
        :type kind: str
        :param seed: The seed of the random start.
        :type seed: int | None
        :rtype: numpy.ndarray
        """
        d = self.dimension
        if kind == 'zeros':
            return self.initial_point()
        elif kind == 'uniform':
            w = np.full(d, 1.0 / np.sqrt(d))
        elif kind == 'random':
            w = make_rng(seed).standard_normal(d) / np.sqrt(d)
        else:
            raise InvalidArgumentError(f'unknown start `{kind}`, expected one of {START_KINDS}.')

        return self._constraint.project(w)

    def __repr__(self):
        return (f'CompositeProblem({self._name}, d={self.dimension}, '
                f'n={self._smooth.component_count}, g={self._regularizer}, '
                f'h={self._constraint})')


def evaluate_phi(problem, w):
    """
    Evaluate Phi(w) = f(w) + g(w) + h(w).

    :param problem: The problem.
    :type problem: CompositeProblem
    :param w: The point.
    :type w: array_like
    :return: f(w) + g(w), or inf when w is infeasible.
    :rtype: float
    """
    w = as_vector(w, problem.dimension)

    if not problem.constraint.is_feasible(w, FEASIBILITY_TOL):
        return np.inf

    return problem.smooth.value(w) + problem.regularizer.value(w)


def minibatch_gradient(oracle, rng, w, M, counters=None):
    """
    Mean of M independent stochastic gradients of f.

    In finite-sum mode the components are drawn uniformly with replacement.

    :param oracle: The smooth oracle.
    :type oracle: SmoothOracle
    :param rng: The run's random stream.
    :type rng: numpy.random.Generator
    :param w: The point.
    :type w: numpy.ndarray
    :param M: The mini-batch size.
    :type M: int
    :param counters: Counted as M gradient calls.
    :type counters: OpCounters | None
    :rtype: numpy.ndarray
    """
    if isinstance(M, bool) or int(M) != M or M < 1:
        raise InvalidArgumentError(f'mini-batch size must be a positive integer, got {M}.')
    M = int(M)

    if oracle.is_finite_sum:
        indices = oracle.sample_indices(rng, M)
        return oracle.batch_gradient(indices, w, counters)

    total = np.zeros(oracle.dimension)
    for _ in range(M):
        total += oracle.sample_gradient(rng, w, counters)

    return total / M


def estimate_variance(oracle, rng, w, draws, counters=None):
    """
    Empirical E||grad F(w, xi) - grad f(w)||^2.

    :param oracle: The smooth oracle.
    :type oracle: SmoothOracle
    :param rng: The random stream to sample with.
    :type rng: numpy.random.Generator
    :param w: The point.
    :type w: numpy.ndarray
    :param draws: Number of samples.
    :type draws: int
    :param counters: The samples are counted, the exact gradient is not.
    :type counters: OpCounters | None
    :rtype: float
    """
    if int(draws) != draws or draws < 1:
        raise InvalidArgumentError(f'draws must be a positive integer, got {draws}.')

    w = as_vector(w, oracle.dimension)
    exact = oracle.full_gradient(w)
    total = 0.0

    if oracle.is_finite_sum:
        indices = oracle.sample_indices(rng, int(draws))
        for start in range(0, indices.shape[0], CHUNK_SIZE):
            grads = oracle.gradient_matrix(indices[start:start + CHUNK_SIZE], w, counters)
            total += float(np.sum((grads - exact[:, None]) ** 2))
    else:
        for _ in range(int(draws)):
            total += float(np.sum((oracle.sample_gradient(rng, w, counters) - exact) ** 2))

    estimate = total / draws
    log.debug(f'variance estimate {estimate} from {draws} draws')

    return estimate
