import numpy as np
import pytest

from gros.metrics import l2_grid_distance
from gros.regression import (
    bandwidth_rule,
    d2_error,
    gaussian_kernel_weights,
    nw_estimate,
    ranw_fit,
    regression_function,
    uniform_grid,
)

NODES = uniform_grid(0, 5, 101)


def test_constant_response():
    x = np.random.default_rng(0).uniform(0, 5, 40)
    fit = nw_estimate(x, np.full(40, 2.5), 0.3, NODES)
    assert np.allclose(fit.values, 2.5)


def test_single_point_far_from_grid():
    fit = nw_estimate([1.0], [7.0], 0.01, NODES)
    # the kernel underflows far away; the nearest response is used there
    assert np.allclose(fit.values, 7.0, rtol=1e-15)


def test_symmetric_sample():
    for h in (0.1, 1.0, 10.0):
        fit = nw_estimate([-1.0, 1.0], [-1.0, 1.0], h, [-0.5, 0.0, 0.5])
        assert fit.values[1] == 0.0
        assert fit.values[0] == -fit.values[2]


def test_matches_direct_formula():
    rng = np.random.default_rng(1)
    x, y = rng.uniform(0, 5, 30), rng.standard_normal(30)
    fit = nw_estimate(x, y, 0.4, NODES)
    k = np.exp(-0.5 * ((NODES[:, None] - x[None, :]) / 0.4) ** 2)
    assert np.allclose(fit.values, k @ y / k.sum(axis=1), rtol=1e-12)


def test_validation():
    with pytest.raises(ValueError):
        nw_estimate([], [], 0.2, NODES)
    with pytest.raises(ValueError):
        gaussian_kernel_weights([0.0], NODES, 0.0)


def test_ranw_one_group_is_nw():
    rng = np.random.default_rng(2)
    x, y = rng.uniform(0, 5, 60), rng.standard_normal(60)
    fit = ranw_fit(x, y, 1, 0.3, NODES, np.random.default_rng(0))
    nw = nw_estimate(x, y, 0.3, NODES)
    assert np.allclose(fit.global_estimate.values, nw.values, rtol=1e-12)
    assert np.allclose(fit.pointwise.values, nw.values, rtol=1e-12)


def test_ranw_identical_groups():
    # a constant response makes every group curve the same
    x = np.repeat(np.linspace(0, 5, 25), 4)
    fit = ranw_fit(x, np.full(100, -1.5), 4, 0.3, NODES, np.random.default_rng(3))
    assert np.allclose(fit.global_estimate.values, -1.5)
    assert np.allclose(fit.pointwise.values, -1.5)
    assert len(fit.candidates) == 4


def test_ranw_global_is_a_candidate_and_pointwise_tracks_them():
    rng = np.random.default_rng(4)
    x = rng.uniform(0, 5, 300)
    y = regression_function(x) + rng.standard_t(2, 300)
    fit = ranw_fit(x, y, 6, 0.3, NODES, np.random.default_rng(5))
    assert l2_grid_distance(fit.global_estimate, fit.candidates[fit.selected_index]) == 0.0
    stack = np.array([c.values for c in fit.candidates])
    assert np.all((stack == fit.pointwise.values).any(axis=0))


def test_bandwidth_rule_examples():
    assert bandwidth_rule(500, 500) == 1.0
    assert bandwidth_rule(1000, 12) == pytest.approx((12 / 1000) ** (1 / 3))
    assert bandwidth_rule(1000, 12) == pytest.approx(0.22894, abs=1e-5)
    with pytest.raises(ValueError):
        bandwidth_rule(10, 20)


def test_d2_error_of_truth_is_zero():
    from gros.metrics import GridFunction

    assert d2_error(GridFunction.from_nodes(NODES, regression_function(NODES))) == 0.0
