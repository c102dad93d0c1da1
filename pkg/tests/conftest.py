# -*- coding: utf-8 -*-

import io

import numpy as np
import pytest

from sproxlib.applications import build_pca, build_quadratic
from sproxlib.console import Console
from sproxlib.datasets import generate_synthetic_pca


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def quadratic():
    """
    f(w) = ||w||^2 with every component the same, so sampled gradients are exact.
    """
    return build_quadratic(np.full(20, 2.0), 3)


@pytest.fixture
def pca_data():
    return generate_synthetic_pca(10, 200, 0.3, seed=7)


@pytest.fixture
def pca(pca_data):
    return build_pca(pca_data)


@pytest.fixture
def output():
    return io.StringIO()


@pytest.fixture
def console(output):
    return Console(stream=output, colors=False)
