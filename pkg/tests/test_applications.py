# -*- coding: utf-8 -*-

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import sparse

from sproxlib.applications import (MIN_LIPSCHITZ, build_fair_classification, build_pca, build_portfolio,
                                   build_quadratic, exp_utility, exp_utility_derivative, fairness_direction,
                                   smoothed01_derivative, smoothed01_loss)
from sproxlib.data import DatasetMatrix
from sproxlib.diagnostics import finite_difference_gradient
from sproxlib.errors import InvalidArgumentError
from sproxlib.projections import FreeSet, HalfspacePair, NonnegBall, Simplex
from sproxlib.regularizers import DEFAULT_SCAD_NU, Mcp, Scad, ScadParams


@pytest.fixture
def fair_data(rng):
    features = rng.standard_normal((4, 30))
    features[1] = rng.integers(0, 2, size=30)
    labels = np.where(rng.standard_normal(30) > 0, 1.0, -1.0)
    return features, labels


@pytest.fixture
def returns(rng):
    return 0.02 + 0.2 * rng.standard_normal((5, 40))


def test_smoothed01_loss():
    assert smoothed01_loss(-2.0) == 1.0
    assert smoothed01_loss(2.0) == 0.0
    assert smoothed01_loss(0.0) == 0.5
    assert_allclose(smoothed01_loss(np.array([-1.0, 1.0])), [1.0, 0.0])

    assert smoothed01_derivative(0.0) == pytest.approx(-0.75)
    assert smoothed01_derivative(1.5) == 0.0


def test_exp_utility():
    assert exp_utility(0.0, 2.0, 1.0) == 0.0
    assert exp_utility(1.0, 2.0, 1.0) == pytest.approx((1.0 - np.exp(-2.0)) / 2.0)
    assert exp_utility(-1.0, 2.0, 1.0) == pytest.approx(np.exp(-1.0) - 1.0)
    assert exp_utility_derivative(0.0, 2.0, 1.0) == 1.0
    assert np.isfinite(exp_utility(-1e4, 2.0, 1.0))

    with pytest.raises(InvalidArgumentError):
        exp_utility(1.0, 0.0, 1.0)


def test_pca_defaults(pca_data):
    problem = build_pca(pca_data)
    d = pca_data.dimension

    assert isinstance(problem.regularizer, Mcp)
    assert problem.regularizer.params.kappa == pytest.approx(1.0 / d)
    assert problem.regularizer.params.nu == 1.0
    assert isinstance(problem.constraint, NonnegBall)

    L = max(np.sum(pca_data.samples ** 2, axis=0))
    assert problem.smoothness.lipschitz_L == pytest.approx(L)


def test_pca_objective(pca_data):
    problem = build_pca(pca_data, ScadParams(0.1, 3.7), radius=2.0)
    x = pca_data.samples
    w = np.full(pca_data.dimension, 0.2)

    assert isinstance(problem.regularizer, Scad)
    assert problem.smooth.value(w) == pytest.approx(-0.5 * np.mean((x.T @ w) ** 2))
    assert problem.explained_variance(w) == pytest.approx(np.mean((x.T @ w) ** 2))
    assert_allclose(problem.smooth.full_gradient(w), -(x @ (x.T @ w)) / x.shape[1])


def test_sparse_and_dense_agree(pca_data, rng):
    dense = build_pca(pca_data)
    sparse_problem = build_pca(DatasetMatrix(sparse.csc_matrix(pca_data.samples)))
    w = rng.standard_normal(pca_data.dimension)
    indices = np.array([0, 5, 5, 17])

    assert sparse_problem.smooth.value(w) == pytest.approx(dense.smooth.value(w))
    assert_allclose(sparse_problem.smooth.full_gradient(w), dense.smooth.full_gradient(w))
    assert_allclose(sparse_problem.smooth.batch_gradient(indices, w), dense.smooth.batch_gradient(indices, w))


def test_all_zero_data():
    problem = build_pca(np.zeros((3, 4)))
    assert problem.smoothness.lipschitz_L == MIN_LIPSCHITZ


def test_empty_data():
    with pytest.raises(InvalidArgumentError):
        build_pca(np.zeros((3, 0)))


def test_fairness_direction():
    features = np.array([[1.0, 0.0, 1.0, 0.0], [2.0, 4.0, 6.0, 8.0]])
    x_hat, others = fairness_direction(features, 0)

    assert_allclose(x_hat, [-0.5])
    assert_allclose(others, [[2.0, 4.0, 6.0, 8.0]])

    with pytest.raises(InvalidArgumentError):
        fairness_direction(features, 2)


def test_fair_classification_layout(fair_data):
    features, labels = fair_data
    problem = build_fair_classification(features, labels, 1, 0.2)
    p, n = 3, 30

    assert problem.dimension == p + n
    assert problem.smooth.component_count == n
    assert problem.smooth.feature_count == p
    assert isinstance(problem.constraint, HalfspacePair)
    assert problem.constraint.c == 0.2
    assert_allclose(problem.constraint.x_hat[p:], np.zeros(n))

    blocks = problem.regularizer.blocks
    assert isinstance(blocks[0][2], Mcp)
    assert isinstance(blocks[1][2], Scad)
    assert blocks[1][2].params.kappa == pytest.approx(1.0 / n)
    assert blocks[1][2].params.nu == DEFAULT_SCAD_NU


def test_fair_classification_gradients(fair_data, rng):
    features, labels = fair_data
    problem = build_fair_classification(features, labels, 1, 0.2)
    f = problem.smooth
    w = 0.3 * rng.standard_normal(problem.dimension)
    indices = np.array([3, 3, 7, 29])

    assert_allclose(f.full_gradient(w), finite_difference_gradient(f.value, w), atol=1e-7)
    assert_allclose(f.full_gradient(w), f.gradient_matrix(np.arange(30), w).mean(axis=1), atol=1e-14)
    assert_allclose(f.batch_gradient(indices, w), f.gradient_matrix(indices, w).mean(axis=1), atol=1e-14)


def test_fair_classification_outliers(fair_data):
    features, labels = fair_data
    problem = build_fair_classification(features, labels, 1, 0.2)
    w = np.zeros(problem.dimension)
    w[3 + 4] = 0.5
    w[3 + 10] = -1.0

    assert list(problem.outliers(w)) == [4, 10]
    assert_allclose(problem.decision_values(np.r_[np.ones(3), np.zeros(30)]),
                    np.delete(features, 1, axis=0).sum(axis=0))


def test_fair_classification_labels_from_dataset(fair_data):
    features, labels = fair_data
    problem = build_fair_classification(DatasetMatrix(features, labels), None, 1, 0.2)
    assert problem.smooth.component_count == 30

    with pytest.raises(InvalidArgumentError):
        build_fair_classification(features, None, 1, 0.2)

    with pytest.raises(InvalidArgumentError):
        build_fair_classification(features, np.zeros(30), 1, 0.2)


def test_vacuous_fairness_constraint():
    # a constant sensitive attribute has no covariance with anything
    features = np.vstack([np.ones(6), np.arange(6.0)])
    problem = build_fair_classification(features, np.array([1.0, -1.0] * 3), 0, 0.1)

    assert isinstance(problem.constraint, FreeSet)


def test_portfolio(returns, rng):
    problem = build_portfolio(returns, 2.0, 1.0)
    f = problem.smooth
    w = problem.constraint.project(rng.uniform(0.0, 1.0, 5))

    assert isinstance(problem.constraint, Simplex)
    assert problem.constraint.augmented
    assert problem.utility(w) == pytest.approx(np.mean(exp_utility(returns.T @ w, 2.0, 1.0)))
    assert_allclose(f.full_gradient(w), finite_difference_gradient(f.value, w), atol=1e-7)
    assert problem.smoothness.lipschitz_L == pytest.approx(2.0 * max(np.sum(returns ** 2, axis=0)))


def test_quadratic():
    problem = build_quadratic([1.0, 3.0], 2)

    assert problem.smooth.value([1.0, 1.0]) == pytest.approx(2.0)
    assert problem.smoothness.lipschitz_L == 3.0

    with pytest.raises(InvalidArgumentError):
        build_quadratic([1.0, -1.0], 2)
