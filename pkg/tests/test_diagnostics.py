# -*- coding: utf-8 -*-

import numpy as np
import pytest

from sproxlib.diagnostics import (SUITES, VARIANCE_SLACK, Checks, additive_noise_problem, brute_force_prox_value,
                                  projection_oracle, run_diagnostics, run_suites, simplex_enumeration_oracle,
                                  unit_quadratic_problem)
from sproxlib.errors import InvalidArgumentError
from sproxlib.problem import CompositeProblem, SmoothnessInfo, estimate_variance
from sproxlib.projections import Simplex
from sproxlib.regularizers import Mcp, prox


@pytest.mark.parametrize('name', list(SUITES))
def test_reduced_suites_pass(name):
    result, = run_suites([name])

    assert result.passed, result.detail
    assert result.checks > 0


def test_suites_are_seeded():
    first, = run_suites(['unbiasedness'], seed=4)
    second, = run_suites(['unbiasedness'], seed=4)

    assert first.checks == second.checks
    assert first.max_violation == second.max_violation


def test_wrong_prox_is_caught():
    def doubled(reg, lam, w):
        return prox(reg, 2.0 * lam, w).zeta

    result, = run_suites(['prox'], prox_fn=doubled)

    assert not result.passed
    assert result.max_violation > 0.0
    assert 'above grid minimum' in result.detail


def test_unknown_suite():
    with pytest.raises(InvalidArgumentError):
        run_suites(['speed'])


def test_checks_treat_nan_as_failure():
    checks = Checks()
    checks.at_most(0.5, 1.0, 'fine')
    checks.at_most(np.nan, 1.0, 'broken')

    assert checks.count == 2
    assert checks.worst == np.inf
    assert checks.where.startswith('broken')


def test_oracles():
    assert brute_force_prox_value(Mcp(1.0, 1.0), 1.0, 3.0, 30_001)[0] == pytest.approx(3.0)
    assert np.allclose(simplex_enumeration_oracle(np.array([1.0, 1.0])), [0.5, 0.5])
    assert np.allclose(projection_oracle(Simplex(dimension=2), np.array([2.0, 0.0])), [1.0, 0.0], atol=1e-6)


def test_run_diagnostics_prints_table(console, output):
    assert run_diagnostics(['projection', 'mapping'], console=console) == 0

    text = output.getvalue()
    assert 'projection' in text
    assert 'mapping' in text
    assert 'FAIL' not in text


@pytest.mark.slow
def test_full_suites_pass():
    for result in run_suites(full=True):
        assert result.passed, f'{result.name}: {result.detail}'


@pytest.mark.parametrize('problem', [additive_noise_problem(4, 0.5), unit_quadratic_problem([1.0, 2.0, 6.0], 3)],
                         ids=['additive noise', 'quadratic'])
def test_empirical_variance_matches_declared(problem, rng):
    declared = problem.smoothness.variance_sigma_sq
    w = np.ones(problem.dimension) / np.sqrt(problem.dimension)

    estimate = estimate_variance(problem.smooth, rng, w, 20_000)
    assert abs(estimate - declared) <= VARIANCE_SLACK * declared


def test_declared_variances():
    # noise^2 d and Var(a)
    assert additive_noise_problem(4, 0.5).smoothness.variance_sigma_sq == pytest.approx(1.0)
    assert unit_quadratic_problem([1.0, 2.0, 6.0], 3).smoothness.variance_sigma_sq == pytest.approx(14.0 / 3.0)


def test_understated_variance_is_caught(rng):
    noisy = additive_noise_problem(4, 1.0)
    understated = CompositeProblem(noisy.smooth, noisy.regularizer, noisy.constraint, SmoothnessInfo(1.0, 2.0))

    estimate = estimate_variance(understated.smooth, rng, np.zeros(4), 10_000)
    assert estimate > (1.0 + VARIANCE_SLACK) * understated.smoothness.variance_sigma_sq
