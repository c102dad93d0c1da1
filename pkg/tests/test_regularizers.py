# -*- coding: utf-8 -*-

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from sproxlib.data import OpCounters
from sproxlib.diagnostics import brute_force_prox_value, prox_objective
from sproxlib.errors import InvalidArgumentError
from sproxlib.regularizers import (BlockComposite, Mcp, McpParams, Scad, ScadParams, ZeroRegularizer,
                                   build_regularizer, moreau_envelope, prox, reg_lipschitz, reg_value,
                                   regularizer_from_params)


def test_reg_value():
    assert reg_value(Mcp(1.0, 1.0), [0.0]) == 0.0
    assert reg_value(Mcp(1.0, 1.0), [2.0]) == pytest.approx(0.5)
    assert reg_value(Scad(1.0, 3.0), [0.5]) == pytest.approx(0.5)
    assert reg_value(Mcp(1.0, 1.0), [2.0, -0.5]) == pytest.approx(0.5 + 0.5 - 0.125)


def test_mcp_values():
    reg = Mcp(1.0, 2.0)
    # kappa|x| - x^2/(2 nu) inside, nu kappa^2 / 2 outside
    assert_allclose(reg.scalar_values([0.0, 1.0, -1.0, 2.0, 5.0]), [0.0, 0.75, 0.75, 1.0, 1.0])


def test_scad_values():
    reg = Scad(1.0, 3.0)
    # the middle piece is (-x^2 + 6|x| - 1)/4
    assert_allclose(reg.scalar_values([0.5, -0.5, 2.0, 3.0, 10.0]), [0.5, 0.5, 1.75, 2.0, 2.0])


def test_mcp_prox_above_threshold_is_identity():
    zeta, envelope = prox(Mcp(1.0, 1.0), 0.5, [3.0])

    assert_allclose(zeta, [3.0])
    assert envelope == pytest.approx(0.5)


def test_mcp_prox_small_input_is_zero():
    zeta, envelope = prox(Mcp(1.0, 1.0), 0.5, [0.3, -0.3])

    assert_array_equal(zeta, [0.0, 0.0])
    assert envelope == pytest.approx(2 * 0.09)


def test_mcp_prox_firm_threshold():
    # (|w| - lam kappa) / (1 - lam/nu)
    zeta = prox(Mcp(1.0, 2.0), 0.5, [1.5, -1.5]).zeta

    assert_allclose(zeta, [4.0 / 3.0, -4.0 / 3.0])


def test_scad_prox_soft_threshold_and_identity():
    zeta = prox(Scad(1.0, 3.7), 0.5, [1.2, -1.2, 10.0]).zeta

    assert_allclose(zeta, [0.7, -0.7, 10.0])


@pytest.mark.parametrize('reg', [Mcp(0.5, 2.0), Mcp(2.0, 0.5), Scad(0.5, 2.5), Scad(1.0, 3.7)])
@pytest.mark.parametrize('lam', [0.05, 0.5, 2.0])
def test_prox_attains_grid_minimum(reg, lam, rng):
    for w in rng.uniform(-8.0, 8.0, size=15):
        zeta = prox(reg, lam, [w]).zeta[0]
        value = prox_objective(reg, lam, w, np.array([zeta]))[0]
        _, grid_min = brute_force_prox_value(reg, lam, w, 20_001)

        assert value <= grid_min + 1e-9


def test_prox_is_odd(rng):
    reg = Scad(0.7, 3.0)
    w = rng.standard_normal(50) * 3

    assert_array_equal(prox(reg, 0.3, -w).zeta, -prox(reg, 0.3, w).zeta)


def test_prox_counts_one_prox_g():
    counters = OpCounters()
    prox(Mcp(1.0, 1.0, 3), 0.1, np.ones(3), counters)
    moreau_envelope(Mcp(1.0, 1.0, 3), 0.1, np.ones(3), counters)

    assert counters.prox_g_calls == 2
    assert counters.prox_h_calls == 0
    assert counters.gradient_calls == 0


def test_envelope_below_regularizer(rng):
    reg = Mcp(1.0, 1.5, 8)
    for _ in range(20):
        w = rng.standard_normal(8) * 2
        assert moreau_envelope(reg, 0.2, w) <= reg.value(w) + 1e-12


def test_zero_regularizer():
    zeta, envelope = prox(ZeroRegularizer(), 1.0, [1.0, -2.0])

    assert_array_equal(zeta, [1.0, -2.0])
    assert envelope == 0.0
    assert reg_lipschitz(ZeroRegularizer()) == 0.0


def test_lipschitz_constants():
    assert reg_lipschitz(Mcp(0.5, 1.0, 4)) == pytest.approx(1.0)
    assert reg_lipschitz(Scad(0.5, 3.0), dimension=9) == pytest.approx(1.5)

    block = BlockComposite([(0, 4, Mcp(1.0, 1.0)), (4, 9, Scad(1.0, 3.7))])
    assert reg_lipschitz(block) == pytest.approx(np.sqrt(13.0))


def test_unbound_lipschitz_is_per_coordinate():
    assert reg_lipschitz(Mcp(0.5, 1.0)) == pytest.approx(0.5)
    assert reg_lipschitz(Scad(2.0, 3.0)) == pytest.approx(2.0)

    with pytest.raises(InvalidArgumentError):
        Mcp(1.0, 1.0).lipschitz()


def test_derivative_is_nan_at_zero():
    slope = Mcp(1.0, 2.0).derivative([0.0, 1.0, -1.0, 3.0])

    assert np.isnan(slope[0])
    assert_allclose(slope[1:], [0.5, -0.5, 0.0])


def test_block_composite_splits():
    block = BlockComposite([(2, 1, ZeroRegularizer()), (0, 2, Mcp(1.0, 1.0))])
    zeta = prox(block, 0.5, [0.3, 3.0, 0.3]).zeta

    assert block.dimension == 3
    assert_allclose(zeta, [0.0, 3.0, 0.3])
    assert block.value([0.3, 3.0, 0.3]) == pytest.approx(0.3 - 0.045 + 0.5)


def test_block_composite_must_tile():
    with pytest.raises(InvalidArgumentError):
        BlockComposite([(0, 2, Mcp(1.0, 1.0)), (3, 1, ZeroRegularizer())])


@pytest.mark.parametrize('bad', [lambda: Scad(1.0, 2.0), lambda: Mcp(0.0, 1.0), lambda: McpParams(1.0, -1.0)])
def test_bad_parameters(bad):
    with pytest.raises(InvalidArgumentError):
        bad()


def test_bad_lambda_and_dimension():
    with pytest.raises(InvalidArgumentError):
        prox(Mcp(1.0, 1.0), 0.0, [1.0])

    with pytest.raises(InvalidArgumentError):
        prox(Mcp(1.0, 1.0, 3), 0.1, [1.0, 2.0])


def test_factories():
    assert isinstance(build_regularizer('SCAD', 4, kappa=1.0, nu=3.7), Scad)
    assert isinstance(regularizer_from_params(ScadParams(1.0, 3.0), 2), Scad)
    assert isinstance(regularizer_from_params(None), ZeroRegularizer)

    with pytest.raises(InvalidArgumentError):
        build_regularizer('lasso', 4)
