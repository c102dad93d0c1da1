# -*- coding: utf-8 -*-

"""
Stochastic proximal algorithms for Phi(w) = f(w) + g(w) + h(w).

Every step takes the prox of lambda g at the current iterate, forms
an estimate of the majorizer gradient grad f(w) + (w - zeta)/lambda,
and projects the gradient step back onto the constraint set.

    MBSPA      mini-batch of M = ceil(N^alpha) stochastic gradients,
               lambda = N^-theta, gamma = 1/L_lambda
    VRSPA      epochs of m = ceil(n^alpha) inner steps on a snapshot
               corrected batch of b = m^2 components, S = ceil(N/m),
               lambda = (S m)^-theta, gamma = 1/(6 L_lambda)
    VRSPA2     VRSPA with gamma = 1/L_lambda
    baseline   full gradient steps with the MBSPA lambda and gamma

Licensed under the MIT License, see LICENSE.
"""

import logging
import math
import time

import numpy as np

from .data.algorithm import Algorithm, Mode
from .data.counters import OpCounters
from .data.results import IterationTrace, RunReport
from .errors import ConfigurationError, SolverError, UnsupportedAlgorithmError
from .mappings import gradient_mapping, stationarity_measure
from .problem import FEASIBILITY_TOL, evaluate_phi, minibatch_gradient
from .projections import project
from .regularizers import prox
from .utils import as_vector, ceil_power, make_rng

log = logging.getLogger(__name__)

# Relative tolerance of the debug mapping identity check.
IDENTITY_TOL = 1e-12


class Schedule(object):
    """
    The quantities an algorithm derives from its config and the problem.
    """
    def __init__(self, algorithm, budget_N, lam, lipschitz_L, gamma, gamma_bar, **kwargs):
        self.algorithm = algorithm
        self.budget_N = budget_N
        self.lam = lam
        self.L_lam = lipschitz_L + 1.0 / lam
        self.gamma = gamma
        self.gamma_bar = gamma_bar

        # MBSPA mini-batch M, or the VRSPA batch b
        self.batch = kwargs.get('batch')
        # VRSPA only
        self.epoch_length = kwargs.get('epoch_length')
        self.epochs = kwargs.get('epochs')

        self.gradient_calls = kwargs.get('gradient_calls')
        self.prox_calls = kwargs.get('prox_calls')

    def as_dict(self):
        return {
            'algorithm': self.algorithm,
            'budget_N': self.budget_N,
            'lambda': self.lam,
            'L_lambda': self.L_lam,
            'gamma': self.gamma,
            'gamma_bar': self.gamma_bar,
            'batch': self.batch,
            'epoch_length': self.epoch_length,
            'epochs': self.epochs,
            'gradient_calls': self.gradient_calls,
            'prox_calls': self.prox_calls
        }

    def __repr__(self):
        return f'Schedule({self.as_dict()})'


def _component_count(problem, algorithm):
    oracle = problem.smooth
    if not oracle.is_finite_sum:
        raise UnsupportedAlgorithmError(f'{algorithm} needs a finite-sum oracle, '
                                        f'{problem.name} can only be sampled.')
    return oracle.component_count


def schedule(problem, config):
    """
    Derive the schedule of a run.

    The gradient and prox call totals are the Trace mode closed forms.

    :param problem: The problem.
    :type problem: sproxlib.problem.CompositeProblem
    :param config: The solver config.
    :type config: sproxlib.data.SolverConfig
    :rtype: Schedule
    """
    algorithm = config.algorithm
    N = config.budget_N
    L = problem.smoothness.lipschitz_L
    gamma_bar = config.gamma_bar

    if algorithm in (Algorithm.MBSPA, Algorithm.BASELINE):
        lam = float(N) ** (-config.theta)
        gamma = 1.0 / (L + 1.0 / lam)

        if algorithm == Algorithm.MBSPA:
            batch = ceil_power(N, config.alpha)
            sched = Schedule(algorithm, N, lam, L, gamma, gamma_bar,
                             batch=batch, gradient_calls=N * batch, prox_calls=2 * N)
        else:
            n = _component_count(problem, algorithm)
            sched = Schedule(algorithm, N, lam, L, gamma, gamma_bar,
                             gradient_calls=N * n, prox_calls=2 * N + 1)
    else:
        n = _component_count(problem, algorithm)
        m = ceil_power(n, config.alpha)
        b = m * m
        S = int(math.ceil(N / m))
        lam = float(S * m) ** (-config.theta)
        L_lam = L + 1.0 / lam
        gamma = 1.0 / (6.0 * L_lam) if algorithm == Algorithm.VRSPA else 1.0 / L_lam

        sched = Schedule(algorithm, N, lam, L, gamma, gamma_bar,
                         batch=b, epoch_length=m, epochs=S,
                         gradient_calls=S * n + S * m * b, prox_calls=2 * S * m)

    if gamma_bar < sched.gamma:
        raise ConfigurationError(f'gamma_bar = N^-tau = {gamma_bar} is smaller '
                                 f'than gamma = {sched.gamma}.')

    log.info(f'schedule: {sched}')
    return sched


def budget_for_gradient_calls(algorithm, calls, n=None, alpha=None):
    """
    The largest N whose closed form gradient call total fits in a budget.

    :param algorithm: One of Algorithm.ALL
    :type algorithm: str
    :param calls: The gradient call budget.
    :type calls: int
    :param n: The number of components, needed except for MBSPA.
    :type n: int | None
    :param alpha: The schedule exponent, defaults to the algorithm default.
    :type alpha: float | None
    :rtype: int
    """
    if algorithm not in Algorithm.ALL:
        raise ConfigurationError(f'unknown algorithm `{algorithm}`.')

    if algorithm == Algorithm.MBSPA:
        alpha = 2.0 / 3.0 if alpha is None else alpha
        # N ceil(N^alpha) is increasing in N
        low, high = 0, max(1, int(calls))
        while low < high:
            mid = (low + high + 1) // 2
            if mid * ceil_power(mid, alpha) <= calls:
                low = mid
            else:
                high = mid - 1
        budget = low
    elif n is None:
        raise ConfigurationError(f'{algorithm} needs the number of components n.')
    elif algorithm == Algorithm.BASELINE:
        budget = int(calls) // n
    else:
        alpha = 1.0 / 3.0 if alpha is None else alpha
        m = ceil_power(n, alpha)
        budget = (int(calls) // (n + m ** 3)) * m

    if budget < 1:
        raise ConfigurationError(f'a budget of {calls} gradient calls is too small '
                                 f'for a single iteration of {algorithm}.')
    return budget


class _Run(object):
    """
    Mutable state of one solver run.
    """
    def __init__(self, problem, config, sched, rng):
        self.problem = problem
        self.config = config
        self.sched = sched
        self.rng = make_rng(config.seed) if rng is None else rng
        self.counters = OpCounters()
        self.trace = []
        self.tracing = config.mode == Mode.TRACE
        self._started = time.perf_counter()

    def initial(self, w_init):
        if w_init is None:
            return self.problem.initial_point()

        w = as_vector(w_init, self.problem.dimension, 'w_init').copy()
        if not self.problem.constraint.is_feasible(w, FEASIBILITY_TOL):
            log.warning('initial point is infeasible, projecting it.')
            w = self.problem.constraint.project(w)

        return w

    def draw(self, upper):
        """
        Uniform draw from {1, ..., upper}.
        """
        return int(self.rng.integers(1, upper + 1))

    def record(self, iteration, w, force=False):
        if not self.tracing:
            return

        if not force and iteration % self.config.trace_every != 0:
            return

        if self.trace and self.trace[-1].iteration == iteration:
            return

        stationarity = None
        if self.config.trace_stationarity:
            stationarity = stationarity_measure(self.problem, w, self.sched.lam,
                                                self.sched.gamma_bar)

        phi = evaluate_phi(self.problem, w)
        if not np.isfinite(phi):
            raise SolverError(f'traced iterate {iteration} is infeasible.')

        self.trace.append(IterationTrace(iteration, self.counters.gradient_calls,
                                         self.counters.prox_calls, phi, stationarity,
                                         time.perf_counter() - self._started))

    def step(self, w, direction):
        """
        w_next = prox_{gamma h}(w - gamma direction).
        """
        gamma = self.sched.gamma
        constraint = self.problem.constraint
        w_next = project(constraint, w - gamma * direction, self.counters)

        if self.config.debug:
            mapped = w - gamma * gradient_mapping(constraint, gamma, w, direction)
            gap = float(np.linalg.norm(w_next - mapped))
            if gap > IDENTITY_TOL * (1.0 + float(np.linalg.norm(w))):
                raise SolverError(f'mapping identity violated by {gap}.')

            if not constraint.is_feasible(w_next, FEASIBILITY_TOL):
                raise SolverError('iterate left the constraint set.')

        return w_next

    def report(self, theory_anchor, theory_output, final_iterate, output_index):
        stationarity = stationarity_measure(self.problem, theory_anchor, self.sched.lam,
                                            self.sched.gamma_bar)
        final_phi = evaluate_phi(self.problem, final_iterate)

        log.info(f'{self.sched.algorithm} done: {self.counters}, '
                 f'final phi {final_phi}, stationarity {stationarity}')

        return RunReport(self.sched.algorithm, theory_output, final_iterate, self.counters,
                         trace=self.trace, stationarity=stationarity, schedule=self.sched,
                         output_index=output_index, final_phi=final_phi)


def _check_algorithm(config, allowed):
    if config.algorithm not in allowed:
        raise ConfigurationError(f'config is for {config.algorithm}, expected one of {allowed}.')


def run_mbspa(problem, config, rng=None, w_init=None):
    """
    Mini-batch stochastic proximal algorithm.

    R is drawn from {1, ..., N} before anything else, so a Trace run
    reports the same theory output as a Theory run with the same seed.

    :param problem: The problem, finite-sum or general.
    :type problem: sproxlib.problem.CompositeProblem
    :param config: An MBSPA config.
    :type config: sproxlib.data.SolverConfig
    :param rng: The run's random stream, defaults to one seeded with config.seed.
    :type rng: numpy.random.Generator | None
    :param w_init: The initial point, defaults to the projected zero vector.
    :type w_init: array_like | None
    :rtype: RunReport
    """
    _check_algorithm(config, (Algorithm.MBSPA,))
    sched = schedule(problem, config)
    run = _Run(problem, config, sched, rng)

    reg = problem.regularizer
    oracle = problem.smooth
    lam = sched.lam

    w = run.initial(w_init)
    R = run.draw(sched.budget_N)
    last = sched.budget_N if run.tracing else R - 1
    log.debug(f'MBSPA R={R}, running {last} iterations')

    theory_anchor = None
    theory_output = None
    run.record(0, w, force=True)

    for k in range(1, last + 1):
        zeta = prox(reg, lam, w, run.counters).zeta
        if k == R:
            theory_anchor, theory_output = w, zeta

        direction = minibatch_gradient(oracle, run.rng, w, sched.batch, run.counters) + (w - zeta) / lam
        w = run.step(w, direction)
        run.record(k, w, force=k == last)

    if theory_output is None:
        theory_anchor = w
        theory_output = prox(reg, lam, w, run.counters).zeta

    return run.report(theory_anchor, theory_output, w, (R, None))


def run_vrspa(problem, config, rng=None, w_init=None):
    """
    Variance reduced stochastic proximal algorithm, VRSPA or VRSPA2.

    Gradient calls follow the S n + S m b convention, a snapshot corrected
    pair counting as one call. When d*n fits the snapshot cache limit the
    component gradients at the snapshot are kept for the epoch, otherwise
    they are recomputed and show up in raw_gradient_evaluations.

    :param problem: A finite-sum problem.
    :type problem: sproxlib.problem.CompositeProblem
    :param config: A VRSPA or VRSPA2 config.
    :type config: sproxlib.data.SolverConfig
    :param rng: The run's random stream, defaults to one seeded with config.seed.
    :type rng: numpy.random.Generator | None
    :param w_init: The initial snapshot, defaults to the projected zero vector.
    :type w_init: array_like | None
    :rtype: RunReport
    """
    _check_algorithm(config, (Algorithm.VRSPA, Algorithm.VRSPA2))
    sched = schedule(problem, config)
    run = _Run(problem, config, sched, rng)

    reg = problem.regularizer
    oracle = problem.smooth
    lam = sched.lam
    n = oracle.component_count
    m, b = sched.epoch_length, sched.batch
    all_components = np.arange(n)

    cached = problem.dimension * n <= config.snapshot_cache_limit
    if not cached:
        log.warning(f'd*n = {problem.dimension * n} is over the snapshot cache limit, '
                    f'snapshot gradients will be recomputed.')

    w = run.initial(w_init)
    R = run.draw(sched.epochs)
    T = run.draw(m)
    epochs = sched.epochs if run.tracing else R
    log.debug(f'{sched.algorithm} R={R} T={T}, running {epochs} epochs')

    theory_anchor = None
    theory_output = None
    iteration = 0
    run.record(0, w, force=True)

    for k in range(1, epochs + 1):
        w_snapshot = w
        inner = m
        if not run.tracing and k == R:
            # only w^R_T is needed from the last epoch
            inner = T - 1

        if inner == 0:
            break

        if cached:
            snapshot_grads = oracle.gradient_matrix(all_components, w_snapshot, run.counters)
            full = snapshot_grads.mean(axis=1)
        else:
            full = oracle.full_gradient(w_snapshot, run.counters)

        for t in range(1, inner + 1):
            zeta = prox(reg, lam, w, run.counters).zeta
            if k == R and t == T:
                theory_anchor, theory_output = w, zeta

            indices = oracle.sample_indices(run.rng, b)
            correction = oracle.batch_gradient(indices, w, run.counters)
            if cached:
                correction -= snapshot_grads[:, indices].mean(axis=1)
            else:
                correction -= oracle.batch_gradient(indices, w_snapshot)
                run.counters.add_raw_evaluations(b)

            direction = correction + full + (w - zeta) / lam
            w = run.step(w, direction)

            iteration += 1
            run.record(iteration, w, force=k == epochs and t == inner)

    if theory_output is None:
        theory_anchor = w
        theory_output = prox(reg, lam, w, run.counters).zeta

    return run.report(theory_anchor, theory_output, w, (R, T))


def run_baseline(problem, config, w_init=None):
    """
    Deterministic full gradient proximal iteration on the majorizer.

    Uses the MBSPA lambda and gamma, and outputs the prox at the last iterate.

    :param problem: A finite-sum problem.
    :type problem: sproxlib.problem.CompositeProblem
    :param config: A baseline config.
    :type config: sproxlib.data.SolverConfig
    :param w_init: The initial point, defaults to the projected zero vector.
    :type w_init: array_like | None
    :rtype: RunReport
    """
    _check_algorithm(config, (Algorithm.BASELINE,))
    sched = schedule(problem, config)
    run = _Run(problem, config, sched, rng=np.random.default_rng(0))

    reg = problem.regularizer
    oracle = problem.smooth
    lam = sched.lam
    N = sched.budget_N

    w = run.initial(w_init)
    run.record(0, w, force=True)

    for k in range(1, N + 1):
        zeta = prox(reg, lam, w, run.counters).zeta
        direction = oracle.full_gradient(w, run.counters) + (w - zeta) / lam
        w = run.step(w, direction)
        run.record(k, w, force=k == N)

    theory_output = prox(reg, lam, w, run.counters).zeta

    return run.report(w, theory_output, w, (N + 1, None))


def solve(problem, config, rng=None, w_init=None):
    """
    Run the algorithm named by the config.

    :param problem: The problem.
    :type problem: sproxlib.problem.CompositeProblem
    :param config: The solver config.
    :type config: sproxlib.data.SolverConfig
    :param rng: Optional random stream, defaults to one seeded with config.seed.
    :type rng: numpy.random.Generator | None
    :param w_init: Optional initial point.
    :type w_init: array_like | None
    :rtype: RunReport
    """
    log.info(f'solving {problem.name} with {config.algorithm}, N={config.budget_N}, '
             f'seed={config.seed}, mode={config.mode}')

    if config.algorithm == Algorithm.MBSPA:
        return run_mbspa(problem, config, rng, w_init)
    elif config.algorithm in (Algorithm.VRSPA, Algorithm.VRSPA2):
        return run_vrspa(problem, config, rng, w_init)

    return run_baseline(problem, config, w_init)
