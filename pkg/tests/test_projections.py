# -*- coding: utf-8 -*-

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from sproxlib.data import OpCounters
from sproxlib.diagnostics import sample_constraints, simplex_enumeration_oracle
from sproxlib.errors import InvalidArgumentError
from sproxlib.projections import (FreeSet, HalfspacePair, NonnegBall, Simplex, build_constraint,
                                  is_feasible, project)


@pytest.mark.parametrize('w, expected', [
    ([0.5, 0.5], [0.5, 0.5]),
    ([1.0, 1.0], [0.5, 0.5]),
    ([2.0, 0.0], [1.0, 0.0]),
    ([-1.0, -1.0], [0.5, 0.5]),
    ([0.1, 0.2, 5.0], [0.0, 0.0, 1.0]),
])
def test_simplex(w, expected):
    assert_allclose(Simplex().project(w), expected, atol=1e-15)


def test_simplex_total():
    assert_allclose(Simplex(total=3.0).project([1.0, 1.0, 4.0]), [0.0, 0.0, 3.0])


@pytest.mark.parametrize('w, expected', [
    ([0.2, 0.3], [0.2, 0.3]),
    ([-0.5, 0.3], [0.0, 0.3]),
    ([1.0, 1.0], [0.5, 0.5]),
    ([-1.0, -1.0], [0.0, 0.0]),
])
def test_augmented_simplex(w, expected):
    assert_allclose(Simplex(augmented=True).project(w), expected, atol=1e-15)


def test_simplex_matches_support_enumeration(rng):
    for _ in range(200):
        d = int(rng.integers(1, 7))
        w = 2.0 * rng.standard_normal(d)
        assert_allclose(Simplex().project(w), simplex_enumeration_oracle(w), atol=1e-10)


@pytest.mark.parametrize('w, expected', [
    ([2.0, 3.0], [0.5, 3.0]),
    ([-2.0, 1.0], [-0.5, 1.0]),
    ([0.25, 7.0], [0.25, 7.0]),
])
def test_halfspace_pair(w, expected):
    assert_allclose(HalfspacePair([1.0, 0.0], 0.5).project(w), expected)


def test_halfspace_pair_pads_x_hat():
    constraint = HalfspacePair([2.0], 1.0, dimension=3)

    assert constraint.dimension == 3
    assert_array_equal(constraint.x_hat, [2.0, 0.0, 0.0])
    assert_allclose(constraint.project([3.0, 5.0, -5.0]), [0.5, 5.0, -5.0])


def test_halfspace_pair_rejects_zero_direction():
    with pytest.raises(InvalidArgumentError):
        HalfspacePair([0.0, 0.0], 1.0)

    with pytest.raises(InvalidArgumentError):
        HalfspacePair([1.0, 0.0], 0.0)


@pytest.mark.parametrize('w, expected', [
    ([3.0, -4.0], [1.0, 0.0]),
    ([0.3, 0.4], [0.3, 0.4]),
    ([3.0, 4.0], [0.6, 0.8]),
    ([-1.0, -1.0], [0.0, 0.0]),
])
def test_nonneg_ball(w, expected):
    assert_allclose(NonnegBall().project(w), expected)


def test_free_set_copies():
    w = np.array([1.0, -2.0])
    p = FreeSet().project(w)
    p[0] = 5.0

    assert w[0] == 1.0


def test_projection_properties(rng):
    for _ in range(100):
        d = int(rng.integers(2, 7))
        w = 3.0 * rng.standard_normal(d)
        u = 3.0 * rng.standard_normal(d)

        for constraint in sample_constraints(rng, d):
            p = constraint.project(w)

            assert constraint.is_feasible(p, 1e-10)
            assert_allclose(constraint.project(p), p, atol=1e-12)
            assert np.linalg.norm(constraint.project(u) - p) <= np.linalg.norm(u - w) + 1e-12


def test_project_counts_prox_h():
    counters = OpCounters()
    project(NonnegBall(dimension=2), [1.0, 1.0], counters)
    project(FreeSet(2), [1.0, 1.0], counters)

    assert counters.prox_h_calls == 2
    assert counters.prox_g_calls == 0


def test_indicator():
    simplex = Simplex(dimension=2)

    assert simplex.indicator([0.5, 0.5]) == 0.0
    assert simplex.indicator([0.5, 0.6]) == np.inf
    assert is_feasible(simplex, [0.5, 0.5 + 1e-12], tol=1e-10)
    assert not is_feasible(Simplex(augmented=True), [0.6, 0.6])
    assert is_feasible(Simplex(augmented=True), [0.1, 0.1])


def test_dimension_is_checked():
    with pytest.raises(InvalidArgumentError):
        NonnegBall(dimension=3).project([1.0, 2.0])


def test_build_constraint():
    assert isinstance(build_constraint('free', 2), FreeSet)
    assert build_constraint('simplex', 2, total=2.0, augmented=True).augmented
    assert build_constraint('nonneg_ball', 2, radius=3.0).radius == 3.0
    assert build_constraint('halfspace_pair', 3, x_hat=[1.0], c=0.2).dimension == 3

    with pytest.raises(InvalidArgumentError):
        build_constraint('box', 2)
