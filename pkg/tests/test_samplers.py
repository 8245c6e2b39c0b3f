import math

import numpy as np
import pytest
from scipy import integrate, stats

from gros import samplers
from gros.samplers import SkewTParams


def rng(seed=0):
    return np.random.default_rng(seed)


def test_streams_are_deterministic_and_distinct():
    a = samplers.make_rng(7, 3).standard_normal(5)
    b = samplers.make_rng(7, 3).standard_normal(5)
    c = samplers.make_rng(7, 4).standard_normal(5)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
    assert np.array_equal(samplers.replicate_rng(1, 2).random(3), samplers.replicate_rng(1, 2).random(3))


def test_mixture_component_frequencies():
    X, labels = samplers.sample_student_mixture(100_000, rng(1))
    assert X.shape == (100_000, 2)
    freq = np.bincount(labels, minlength=3) / len(labels)
    assert np.allclose(freq, [0.45, 0.45, 0.10], atol=0.01)


def test_student_abs_mean_formula_and_quadrature():
    assert samplers.student_abs_mean(3) == pytest.approx(2 * math.sqrt(3) / math.pi, rel=1e-12)
    for nu in (1.5, 3, 7.5):
        quad, _ = integrate.quad(lambda t: 2 * t * stats.t.pdf(t, nu), 0, np.inf)
        assert samplers.student_abs_mean(nu) == pytest.approx(quad, rel=1e-7)


def test_skew_t_symmetric_case():
    x = samplers.sample_skew_t_noise(100_000, SkewTParams(sigma=9, nu=3, xi=1), rng(2))
    assert abs((x > 0).mean() - 0.5) <= 0.01


def test_skew_t_centred():
    x = samplers.sample_skew_t_noise(1_000_000, SkewTParams(sigma=9, nu=3, xi=9), rng(3))
    assert abs(x.mean()) <= 0.2


def test_skew_t_two_piece_shape():
    # the two-piece law puts mass xi^2 / (1 + xi^2) above its mode
    p = SkewTParams(sigma=1, nu=5, xi=2)
    x = samplers.sample_skew_t_noise(200_000, p, rng(4)) + samplers.skew_t_mean(p)
    assert (x > 0).mean() == pytest.approx(4 / 5, abs=0.005)


def test_skew_t_requires_finite_mean():
    with pytest.raises(ValueError):
        SkewTParams(nu=1.0)


def test_uniform_disk_radius():
    X = samplers.sample_uniform_ring(100_000, 0.0, 1.0, rng(5))
    r = np.linalg.norm(X, axis=1)
    assert abs(r.mean() - 2 / 3) <= 0.01 and r.max() <= 1.0
    with pytest.raises(ValueError):
        samplers.sample_uniform_ring(5, 1.0, 1.0, rng())


def test_ring_mixture_extremes():
    X, out = samplers.sample_ring_mixture(2000, 0.0, rng(6))
    assert not out.any() and np.linalg.norm(X, axis=1).max() <= 1.0
    X, out = samplers.sample_ring_mixture(2000, 1.0, rng(6))
    r = np.linalg.norm(X, axis=1)
    assert out.all() and r.min() >= 1.0 - 1e-12 and r.max() <= 1.25 + 1e-12


def test_ring_mixture_outlier_count():
    counts = [samplers.sample_ring_mixture(2000, 0.01, rng(s))[1].sum() for s in range(200)]
    assert np.mean(counts) == pytest.approx(20, abs=1.0)


def test_circle_scenarios():
    S = samplers.sample_circle_scenarios(rng(7))
    assert S.baseline.shape == S.scenario1.shape == S.scenario2.shape == (600, 2)
    assert np.allclose(np.linalg.norm(S.baseline, axis=1), 1.0)
    assert abs(np.linalg.norm(S.scenario1, axis=1).mean() - 1.0) <= 0.01
    # 540 points are kept from scenario 1
    kept = (S.scenario2[:, None, :] == S.scenario1[None, :, :]).all(-1).any(1)
    assert kept.sum() >= 540


def test_matern_children_within_radius():
    parents, children = samplers.sample_matern_cluster(50, 0.1, 10, rng(8))
    d = np.linalg.norm(children[:, None, :] - parents[None, :, :], axis=2).min(axis=1)
    assert len(parents) > 0 and d.max() <= 0.1 + 1e-12


def test_student_rewards_moments():
    assert abs(samplers.sample_student_rewards(5.0, 3, 100_000, rng(9)).mean() - 5.0) <= 0.05
    assert abs(samplers.sample_student_rewards(0.0, 3, 1_000_000, rng(10)).var() - 3.0) <= 0.3
