# -*- coding: utf-8 -*-

"""
Numerical self checks of the library against brute-force oracles.

Every check compares an amount against its own tolerance. A suite
reports how many checks it made and the largest amount by which any
check exceeded its tolerance, 0 when all passed. The default sizes are
reduced, full=True runs the acceptance sizes with the same tolerances.
The oracles are public so the tests can use them directly.

Licensed under the MIT License, see LICENSE.
"""

import itertools
import logging
import time

import numpy as np
from scipy import optimize

from .applications import build_fair_classification, build_pca, build_portfolio, build_quadratic
from .console import Color, Console
from .datasets import generate_synthetic_pca
from .errors import InvalidArgumentError
from .mappings import MajorizerState, eval_majorizer, gradient_mapping, majorizer_gradient
from .problem import FEASIBILITY_TOL, CompositeProblem, SmoothnessInfo, StochasticOracle, estimate_variance
from .projections import FreeSet, HalfspacePair, NonnegBall, Simplex
from .regularizers import Mcp, Scad, ZeroRegularizer, prox, reg_lipschitz
from .utils import make_rng

log = logging.getLogger(__name__)

# Parameter grid of the prox suite.
PROX_KAPPAS = (0.1, 1.0, 3.0)
PROX_LAMBDAS = (0.05, 0.5, 2.0)
MCP_NUS = (1.0, 2.0, 4.0)
SCAD_NUS = (2.5, 3.7, 5.0)

MOREAU_LAMBDAS = (0.01, 0.1, 1.0)

# Relative slack of an empirical variance over the declared sigma^2.
VARIANCE_SLACK = 0.1


class SuiteResult(object):
    """
    The outcome of one diagnostic suite.
    """
    def __init__(self, name, checks, max_violation, detail='', seconds=0.0):
        """
        :param name: The suite name.
        :type name: str
        :param checks: Number of checks made.
        :type checks: int
        :param max_violation: Largest excess over a tolerance, 0 if none.
        :type max_violation: float
        :param detail: Where the largest violation happened.
        :type detail: str
        :param seconds: Run time of the suite.
        :type seconds: float
        """
        self.name = name
        self.checks = int(checks)
        self.max_violation = float(max_violation)
        self.detail = detail
        self.seconds = float(seconds)

    @property
    def passed(self):
        return self.max_violation == 0.0

    def __repr__(self):
        state = 'pass' if self.passed else 'FAIL'
        return (f'SuiteResult({self.name}, {state}, checks={self.checks}, '
                f'max_violation={self.max_violation:.3g})')


class Checks(object):
    """
    Collects checks and keeps the worst violation.
    """
    def __init__(self):
        self.count = 0
        self.worst = 0.0
        self.where = ''

    def at_most(self, amount, tolerance, where=''):
        """
        Check amount <= tolerance. NaN counts as an infinite violation.
        """
        self.count += 1
        amount = float(amount)
        excess = np.inf if np.isnan(amount) else amount - tolerance
        if excess > self.worst:
            self.worst = excess
            self.where = f'{where} ({amount:.6g} > {tolerance:.3g})'


# oracles

def prox_objective(reg, lam, w, x):
    """
    The scalar prox subproblem (x - w)^2/(2 lam) + g(x), elementwise in x.

    :rtype: numpy.ndarray
    """
    x = np.asarray(x, dtype=np.float64)
    return (x - w) ** 2 / (2.0 * lam) + reg.scalar_values(x.ravel()).reshape(x.shape)


def brute_force_prox_value(reg, lam, w, points=1_000_000):
    """
    Grid minimum of the scalar prox subproblem.

    The minimizer of an even penalty that grows with |x| lies between 0
    and w, so the grid covers that interval, endpoints included.

    :param reg: A scalar-separable regularizer.
    :type reg: sproxlib.regularizers.Regularizer
    :param lam: lambda > 0
    :type lam: float
    :param w: The scalar input.
    :type w: float
    :param points: Grid size.
    :type points: int
    :return: The grid minimizer and the minimum.
    :rtype: tuple
    """
    grid = np.linspace(0.0, float(w), int(points))
    values = prox_objective(reg, lam, float(w), grid)
    best = int(np.argmin(values))

    return float(grid[best]), float(values[best])


def simplex_enumeration_oracle(w, total=1.0):
    """
    Exact simplex projection by enumerating supports, for small d.

    On a support S the KKT point is w_S - (sum(w_S) - total)/|S|, the
    projection is the nearest feasible one among all supports.

    :rtype: numpy.ndarray
    """
    w = np.asarray(w, dtype=np.float64)
    d = w.shape[0]
    if d > 12:
        raise InvalidArgumentError('support enumeration is only for small d.')

    best, best_dist = None, np.inf
    for size in range(1, d + 1):
        for support in itertools.combinations(range(d), size):
            idx = list(support)
            u = np.zeros(d)
            u[idx] = w[idx] - (w[idx].sum() - total) / size
            if u.min() < 0.0:
                continue

            dist = float(np.sum((u - w) ** 2))
            if dist < best_dist:
                best, best_dist = u, dist

    return best


def projection_oracle(constraint, w):
    """
    Nearest point of a constraint set by a generic constrained
    least-squares solve with scipy.optimize.

    :rtype: numpy.ndarray
    """
    w = np.asarray(w, dtype=np.float64)
    d = w.shape[0]
    constraints = []
    bounds = None
    x0 = np.zeros(d)

    if isinstance(constraint, FreeSet):
        return w.copy()

    elif isinstance(constraint, Simplex):
        bounds = [(0.0, None)] * d
        kind = 'ineq' if constraint.augmented else 'eq'
        constraints.append({'type': kind, 'fun': lambda u: constraint.total - u.sum(),
                            'jac': lambda u: -np.ones(d)})
        x0 = np.full(d, constraint.total / d)

    elif isinstance(constraint, HalfspacePair):
        x_hat, c = constraint.x_hat, constraint.c
        constraints.append({'type': 'ineq', 'fun': lambda u: c - x_hat @ u, 'jac': lambda u: -x_hat})
        constraints.append({'type': 'ineq', 'fun': lambda u: c + x_hat @ u, 'jac': lambda u: x_hat})

    elif isinstance(constraint, NonnegBall):
        bounds = [(0.0, None)] * d
        r = constraint.radius
        constraints.append({'type': 'ineq', 'fun': lambda u: r * r - u @ u, 'jac': lambda u: -2.0 * u})

    else:
        raise InvalidArgumentError(f'no projection oracle for {constraint!r}.')

    result = optimize.minimize(lambda u: 0.5 * np.sum((u - w) ** 2), x0, jac=lambda u: u - w,
                               bounds=bounds, constraints=constraints, method='SLSQP',
                               options={'ftol': 1e-14, 'maxiter': 1000})

    return result.x


def finite_difference_gradient(fn, w, step=1e-6):
    """
    Central finite differences of a scalar function.

    :rtype: numpy.ndarray
    """
    w = np.asarray(w, dtype=np.float64)
    grad = np.zeros_like(w)
    for i in range(w.shape[0]):
        e = np.zeros_like(w)
        e[i] = step
        grad[i] = (fn(w + e) - fn(w - e)) / (2.0 * step)

    return grad


def sample_constraints(rng, d):
    """
    One constraint of every kind in dimension d, both simplex variants.

    :rtype: list
    """
    return [FreeSet(d), Simplex(dimension=d), Simplex(augmented=True, dimension=d),
            HalfspacePair(rng.standard_normal(d), 0.5, d), NonnegBall(dimension=d)]


def _default_prox(reg, lam, w):
    return prox(reg, lam, w).zeta


# suites

def prox_suite(rng, full=False, prox_fn=None):
    """
    Closed form prox against the grid minimum of the scalar subproblem.

    :param prox_fn: (reg, lam, w) -> zeta, the prox under test.
    :type prox_fn: callable | None
    :rtype: Checks
    """
    prox_fn = prox_fn or _default_prox
    inputs = 200 if full else 25
    points = 1_000_000 if full else 20_000
    checks = Checks()

    grid = [(Mcp, nu) for nu in MCP_NUS] + [(Scad, nu) for nu in SCAD_NUS]
    for (kind, nu), kappa, lam in itertools.product(grid, PROX_KAPPAS, PROX_LAMBDAS):
        reg = kind(kappa, nu)
        bound = 5.0 * nu * kappa + 5.0 * lam * kappa
        ws = rng.uniform(-bound, bound, size=inputs)
        zetas = np.asarray(prox_fn(reg, lam, ws), dtype=np.float64)

        for w, zeta in zip(ws, zetas):
            _, grid_min = brute_force_prox_value(reg, lam, w, points)
            value = float(prox_objective(reg, lam, w, np.array([zeta]))[0])
            checks.at_most(value - grid_min, 1e-6, f'{reg} lam={lam} w={w:.6g} above grid minimum')

        # both penalties are even
        flipped = np.asarray(prox_fn(reg, lam, -ws), dtype=np.float64)
        checks.at_most(np.max(np.abs(flipped + zetas)), 1e-12, f'{reg} lam={lam} symmetry')

    return checks


def projection_suite(rng, full=False):
    """
    Projections against support enumeration on the simplex and the scipy
    oracle on every kind, plus feasibility, idempotence and nonexpansiveness.

    :rtype: Checks
    """
    instances = 1000 if full else 100
    checks = Checks()

    # single coordinate boundary: the simplex is the point {total}
    for x in (-3.0, 0.0, 0.4, 1.0, 5.0):
        checks.at_most(abs(Simplex(dimension=1).project([x])[0] - 1.0), 1e-15, f'simplex d=1 at {x}')
        checks.at_most(abs(simplex_enumeration_oracle([x])[0] - 1.0), 1e-15, f'enumeration d=1 at {x}')
        capped = Simplex(augmented=True, dimension=1).project([x])[0]
        checks.at_most(abs(capped - min(max(x, 0.0), 1.0)), 1e-15, f'augmented simplex d=1 at {x}')

    for i in range(instances):
        d = int(rng.integers(1, 7))
        w = 2.0 * rng.standard_normal(d)
        u = 2.0 * rng.standard_normal(d)

        exact = simplex_enumeration_oracle(w)
        checks.at_most(np.max(np.abs(Simplex(dimension=d).project(w) - exact)), 1e-10,
                       f'simplex d={d} #{i} off the exact projection')

        for constraint in sample_constraints(rng, d):
            p = constraint.project(w)
            where = f'{constraint!r} d={d} #{i}'

            checks.at_most(0.0 if constraint.is_feasible(p, FEASIBILITY_TOL) else np.inf, 0.0,
                           where + ' infeasible')
            checks.at_most(np.max(np.abs(constraint.project(p) - p)), 1e-12, where + ' idempotence')

            expansion = np.linalg.norm(constraint.project(u) - p) - np.linalg.norm(u - w)
            checks.at_most(expansion, 1e-12, where + ' nonexpansive')

            oracle = projection_oracle(constraint, w)
            if constraint.is_feasible(oracle, 1e-9):
                excess = np.linalg.norm(p - w) - np.linalg.norm(oracle - w)
                checks.at_most(excess, 1e-7, where + ' farther than the oracle')

    return checks


def majorization_suite(rng, full=False):
    """
    E(w) + h(w) >= f(w) + e_lambda g(w) + h(w), equality at the anchor,
    and the smoothness of grad E, on a synthetic PCA problem with d = 20.

    :rtype: Checks
    """
    anchors = 100 if full else 10
    points = 100 if full else 20
    d = 20

    data = generate_synthetic_pca(d, 200, 0.2, int(rng.integers(2 ** 31)))
    problem = build_pca(data)
    reg, f = problem.regularizer, problem.smooth
    lam = 0.1
    L_lam = problem.smoothness.lipschitz_L + 1.0 / lam
    checks = Checks()

    def feasible():
        return problem.constraint.project(rng.standard_normal(d))

    for a in range(anchors):
        anchor = feasible()
        state = MajorizerState.at(reg, lam, anchor)
        touching = f.value(anchor) + prox(reg, lam, anchor).envelope_value
        checks.at_most(abs(eval_majorizer(state, f.value(anchor), anchor) - touching), 1e-9,
                       f'anchor #{a} equality')

        for _ in range(points):
            w, x = feasible(), feasible()
            lower = f.value(w) + prox(reg, lam, w).envelope_value
            checks.at_most(lower - eval_majorizer(state, f.value(w), w), 1e-9,
                           f'anchor #{a} majorization')

            grad_w = majorizer_gradient(state, f.full_gradient(w), w)
            grad_x = majorizer_gradient(state, f.full_gradient(x), x)
            ratio = np.linalg.norm(grad_w - grad_x) / max(np.linalg.norm(w - x), 1e-300)
            checks.at_most(ratio, L_lam * (1.0 + 1e-6), f'anchor #{a} smoothness ratio')

    return checks


def moreau_suite(rng, full=False):
    """
    e <= g, ||w - zeta|| <= 2 l lambda, g - e <= l^2 lambda / 2 and the
    subgradient identity (w - zeta)/lambda = g'(zeta) where g is differentiable.

    :rtype: Checks
    """
    count = 1000 if full else 100
    d = 10
    checks = Checks()

    for reg in (Mcp(1.0, 2.0, d), Mcp(0.5, 1.0, d), Scad(1.0, 3.7, d), Scad(0.3, 2.5, d)):
        l = reg_lipschitz(reg)
        for lam in MOREAU_LAMBDAS:
            for i in range(count):
                w = 3.0 * rng.standard_normal(d)
                zeta, envelope = prox(reg, lam, w)
                g = reg.value(w)
                where = f'{reg} lam={lam} #{i}'

                checks.at_most(envelope - g, 1e-10, where + ' envelope above g')
                checks.at_most(np.linalg.norm(w - zeta) - 2.0 * l * lam, 1e-10, where + ' displacement')
                checks.at_most(g - envelope - l * l * lam / 2.0, 1e-10, where + ' envelope gap')

                slope = reg.derivative(zeta)
                smooth = np.isfinite(slope)
                if smooth.any():
                    residual = np.max(np.abs((w - zeta)[smooth] / lam - slope[smooth]))
                    checks.at_most(residual, 1e-6, where + ' subgradient')

    return checks


def application_problems(rng):
    """
    Small PCA, fair classification and portfolio problems.

    :rtype: list
    """
    pca = build_pca(generate_synthetic_pca(8, 30, 0.5, int(rng.integers(2 ** 31))))

    features = rng.standard_normal((5, 20))
    features[0] = rng.integers(0, 2, size=20)
    labels = np.where(rng.standard_normal(20) > 0, 1.0, -1.0)
    fair = build_fair_classification(features, labels, 0, 0.5)

    returns = 0.01 + 0.3 * rng.standard_normal((6, 25))
    portfolio = build_portfolio(returns, 2.0, 1.0)

    return [pca, fair, portfolio]


def gradients_suite(rng, full=False):
    """
    Application gradients against central finite differences, the full
    gradient against the component mean, and the declared L.

    :rtype: Checks
    """
    count = 50 if full else 10
    checks = Checks()

    for problem in application_problems(rng):
        f = problem.smooth
        d = f.dimension
        n = f.component_count
        L = problem.smoothness.lipschitz_L

        for i in range(count):
            w = problem.constraint.project(rng.standard_normal(d))
            where = f'{problem.name} #{i}'

            grad = f.full_gradient(w)
            scale = max(np.linalg.norm(grad), 1.0)
            fd = finite_difference_gradient(f.value, w)
            checks.at_most(np.linalg.norm(fd - grad) / scale, 1e-5, where + ' finite differences')

            mean = f.gradient_matrix(np.arange(n), w).mean(axis=1)
            checks.at_most(np.linalg.norm(mean - grad) / scale, 1e-10, where + ' component mean')

            x = problem.constraint.project(rng.standard_normal(d))
            ratio = np.linalg.norm(f.full_gradient(x) - grad) / max(np.linalg.norm(x - w), 1e-300)
            checks.at_most(ratio, L * (1.0 + 1e-9), where + ' smoothness ratio')

    return checks


def unbiasedness_suite(rng, full=False):
    """
    The mean of sampled component gradients lies within 4 standard
    errors of the full gradient, per coordinate, on a PCA problem.

    :rtype: Checks
    """
    points = 10 if full else 3
    draws = 100_000 if full else 10_000
    problem = build_pca(generate_synthetic_pca(10, 500, 0.3, int(rng.integers(2 ** 31))))
    f = problem.smooth
    checks = Checks()

    for i in range(points):
        w = problem.constraint.project(rng.standard_normal(f.dimension))
        grads = f.gradient_matrix(f.sample_indices(rng, draws), w)

        band = 4.0 * grads.std(axis=1) / np.sqrt(draws) + 1e-12
        deviation = np.abs(grads.mean(axis=1) - f.full_gradient(w)) / band
        checks.at_most(deviation.max(), 1.0, f'point #{i} in 4 sigma bands')

    return checks


def additive_noise_problem(d, noise):
    """
    f(w) = ||w||^2 / 2 sampled as w + noise * xi, xi ~ N(0, I), so
    sigma^2 = noise^2 d exactly.

    :rtype: CompositeProblem
    """
    def value(w):
        return 0.5 * float(w @ w)

    def gradient(w):
        return w

    def sample_gradient(rng, w):
        return w + noise * rng.standard_normal(d)

    oracle = StochasticOracle(d, value, gradient, sample_gradient)
    return CompositeProblem(oracle, ZeroRegularizer(d), FreeSet(d),
                            SmoothnessInfo(1.0, noise * noise * d), 'additive noise')


def unit_quadratic_problem(scales, d):
    """
    The quadratic finite sum with sigma^2 = Var(a) declared, which is
    its exact variance on the unit sphere.

    :rtype: CompositeProblem
    """
    scales = np.asarray(scales, dtype=np.float64)
    quadratic = build_quadratic(scales, d)
    return CompositeProblem(quadratic.smooth, quadratic.regularizer, quadratic.constraint,
                            SmoothnessInfo(float(scales.max()), float(scales.var())), 'quadratic')


def variance_suite(rng, full=False):
    """
    The empirical E||grad F - grad f||^2 within 10% of the declared
    sigma^2, for a sampled oracle and a finite sum.

    :rtype: Checks
    """
    points = 10 if full else 3
    draws = 100_000 if full else 10_000
    d = 5
    checks = Checks()

    for problem in (additive_noise_problem(d, 0.7), unit_quadratic_problem([1.0, 2.0, 6.0], d)):
        declared = problem.smoothness.variance_sigma_sq
        for i in range(points):
            w = rng.standard_normal(d)
            w /= np.linalg.norm(w)

            estimate = estimate_variance(problem.smooth, rng, w, draws)
            checks.at_most(abs(estimate - declared) / declared, VARIANCE_SLACK,
                           f'{problem.name} point #{i} variance {estimate:.6g} vs {declared:.6g}')

    return checks


def mapping_suite(rng, full=False):
    """
    ||P_gamma1(w, s)|| <= ||P_gamma2(w, s)|| whenever gamma1 >= gamma2.

    :rtype: Checks
    """
    count = 1000 if full else 100
    d = 5
    checks = Checks()

    for constraint in sample_constraints(rng, d):
        for i in range(count):
            w = constraint.project(rng.standard_normal(d))
            s = 3.0 * rng.standard_normal(d)
            gamma2, gamma1 = np.sort(rng.uniform(0.01, 5.0, size=2))

            big = np.linalg.norm(gradient_mapping(constraint, gamma1, w, s))
            small = np.linalg.norm(gradient_mapping(constraint, gamma2, w, s))
            checks.at_most(big - small, 1e-10 * (1.0 + small), f'{constraint!r} #{i}')

    return checks


SUITES = {
    'prox': prox_suite,
    'projection': projection_suite,
    'majorization': majorization_suite,
    'moreau': moreau_suite,
    'gradients': gradients_suite,
    'unbiasedness': unbiasedness_suite,
    'variance': variance_suite,
    'mapping': mapping_suite
}


def run_suites(names=None, full=False, seed=0, prox_fn=None):
    """
    Run diagnostic suites.

    :param names: Suite names, all by default.
    :type names: list | None
    :param full: Use the acceptance sizes.
    :type full: bool
    :param seed: Seed of the random inputs.
    :type seed: int
    :param prox_fn: A replacement prox for the prox suite.
    :type prox_fn: callable | None
    :rtype: list
    """
    names = list(SUITES) if not names else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise InvalidArgumentError(f'unknown suite(s) {unknown}, expected some of {list(SUITES)}.')

    results = []
    for name in names:
        # each suite gets its own stream, so one suite runs the same alone or in the set
        rng = make_rng([seed, list(SUITES).index(name)])
        started = time.perf_counter()
        if name == 'prox':
            checks = prox_suite(rng, full, prox_fn)
        else:
            checks = SUITES[name](rng, full)

        result = SuiteResult(name, checks.count, max(checks.worst, 0.0), checks.where,
                             time.perf_counter() - started)
        if result.passed:
            log.info(f'suite {name} passed {result.checks} checks in {result.seconds:.1f}s')
        else:
            log.warning(f'suite {name} failed: {result.detail}')

        results.append(result)

    return results


def run_diagnostics(names=None, full=False, seed=0, console=None, prox_fn=None):
    """
    Run the suites and print a pass/fail table.

    :return: 0 when every suite passed, 1 otherwise.
    :rtype: int
    """
    console = console or Console()
    results = run_suites(names, full, seed, prox_fn)

    rows = []
    colors = []
    for r in results:
        rows.append([r.name, 'pass' if r.passed else 'FAIL', r.checks,
                     f'{r.max_violation:.3g}', f'{r.seconds:.1f}s'])
        colors.append(Color.GREEN if r.passed else Color.B_RED)

    console.table(['suite', 'result', 'checks', 'max violation', 'time'], rows, colors)

    failed = [r for r in results if not r.passed]
    for r in failed:
        console.write(f'{r.name}: {r.detail}', Color.RED)

    return 1 if failed else 0
