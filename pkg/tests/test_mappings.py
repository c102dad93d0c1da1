# -*- coding: utf-8 -*-

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sproxlib.data import OpCounters
from sproxlib.diagnostics import sample_constraints
from sproxlib.mappings import (MajorizerState, eval_majorizer, gradient_mapping, majorizer_gradient,
                               stationarity_measure)
from sproxlib.projections import FreeSet, NonnegBall
from sproxlib.regularizers import Mcp, prox


def test_free_mapping_is_the_gradient():
    counters = OpCounters()
    s = np.array([1.0, -2.0])

    assert_allclose(gradient_mapping(FreeSet(2), 0.3, [5.0, 5.0], s, counters), s)
    assert counters.prox_h_calls == 0


def test_nonneg_ball_mapping():
    counters = OpCounters()
    # w - gamma s = (-1, 1) projects to (0, 1)
    mapping = gradient_mapping(NonnegBall(dimension=2), 1.0, [1.0, 1.0], [2.0, 0.0], counters)

    assert_allclose(mapping, [1.0, 0.0])
    assert counters.prox_h_calls == 1


def test_mapping_norm_shrinks_with_gamma(rng):
    for constraint in sample_constraints(rng, 4):
        for _ in range(50):
            w = constraint.project(rng.standard_normal(4))
            s = 3.0 * rng.standard_normal(4)
            small, big = np.sort(rng.uniform(0.01, 5.0, size=2))

            assert (np.linalg.norm(gradient_mapping(constraint, big, w, s))
                    <= np.linalg.norm(gradient_mapping(constraint, small, w, s)) * (1 + 1e-10) + 1e-12)


def test_majorizer_touches_at_anchor(pca):
    reg, f = pca.regularizer, pca.smooth
    anchor = pca.constraint.project(np.linspace(0.1, 1.0, pca.dimension))
    state = MajorizerState.at(reg, 0.1, anchor)

    expected = f.value(anchor) + prox(reg, 0.1, anchor).envelope_value
    assert eval_majorizer(state, f.value(anchor), anchor) == pytest.approx(expected, abs=1e-12)


def test_majorizer_lies_above(pca, rng):
    reg, f = pca.regularizer, pca.smooth
    lam = 0.2
    state = MajorizerState.at(reg, lam, pca.constraint.project(rng.standard_normal(pca.dimension)))

    for _ in range(30):
        w = pca.constraint.project(rng.standard_normal(pca.dimension))
        lower = f.value(w) + prox(reg, lam, w).envelope_value
        assert eval_majorizer(state, f.value(w), w) >= lower - 1e-9


def test_majorizer_gradient():
    reg = Mcp(1.0, 1.0, 2)
    state = MajorizerState.at(reg, 0.5, [3.0, 0.3])

    # zeta = (3, 0)
    assert_allclose(state.zeta, [3.0, 0.0])
    assert_allclose(majorizer_gradient(state, [1.0, 1.0], [4.0, 1.0]), [3.0, 3.0])


def test_majorizer_state_counts_prox_g():
    counters = OpCounters()
    MajorizerState.at(Mcp(1.0, 1.0), 0.5, [1.0], counters)

    assert counters.prox_g_calls == 1


def test_stationarity_zero_at_minimizer(quadratic):
    assert stationarity_measure(quadratic, np.zeros(3), 0.1, 1.0) == 0.0


def test_stationarity_of_quadratic(quadratic):
    # f = ||w||^2, no regularizer or constraint, the mapping is the gradient 2w
    w = np.array([1.0, 2.0, 2.0])
    assert stationarity_measure(quadratic, w, 0.1, 1.0) == pytest.approx(6.0)


def test_stationarity_counts_only_when_asked(quadratic):
    counters = OpCounters()
    stationarity_measure(quadratic, np.ones(3), 0.1, 1.0)
    stationarity_measure(quadratic, np.ones(3), 0.1, 1.0, counters)

    assert counters.prox_g_calls == 1
    assert counters.gradient_calls == 20
