"""Random generators for the simulation studies.

Every function takes an explicit :class:`numpy.random.Generator`; nothing
touches global random state. Replicate streams come from
:func:`replicate_rng`, which is deterministic in ``(seed, replicate)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for the independent stream ``stream`` of ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), int(stream)]))


def replicate_rng(seed: int, replicate: int) -> np.random.Generator:
    return make_rng(seed, replicate)


# ---------------------------------------------------------------------------
# Clustering: mixture of three bivariate Student laws

MIXTURE_WEIGHTS = np.array([0.45, 0.45, 0.10])
MIXTURE_MEANS = np.array([[6.0, 0.0], [-6.0, 0.0], [0.0, 6.0]])
MIXTURE_SCALES = np.array([[[3.0, 0.0], [0.0, 3.0]],
                           [[3.0, 0.0], [0.0, 3.0]],
                           [[4.0, 1.0], [1.0, 9.0]]])
MIXTURE_DF = 2.0


def sample_multivariate_t(n: int, mean, scale, df: float, rng: np.random.Generator) -> np.ndarray:
    """``mean + L z / sqrt(w / df)`` with ``L L' = scale``, ``z`` normal, ``w`` chi-square."""
    L = np.linalg.cholesky(np.asarray(scale, dtype=float))
    z = rng.standard_normal((n, len(L)))
    w = rng.chisquare(df, size=n)
    return np.asarray(mean, dtype=float) + (z @ L.T) / np.sqrt(w / df)[:, None]


def sample_student_mixture(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Points from the three-component Student mixture and their component labels (0, 1, 2)."""
    if n < 1:
        raise ValueError("n must be positive")
    labels = rng.choice(3, size=n, p=MIXTURE_WEIGHTS)
    X = np.empty((n, 2))
    for c in range(3):
        idx = np.flatnonzero(labels == c)
        X[idx] = sample_multivariate_t(len(idx), MIXTURE_MEANS[c], MIXTURE_SCALES[c], MIXTURE_DF, rng)
    return X, labels


# ---------------------------------------------------------------------------
# Regression noise: two-piece (Fernandez-Steel) skew Student


@dataclass(frozen=True)
class SkewTParams:
    sigma: float = 9.0
    nu: float = 3.0
    xi: float = 1.0
    kappa: float = 0.0

    def __post_init__(self):
        if self.sigma <= 0 or self.xi <= 0:
            raise ValueError("sigma and xi must be positive")
        if self.nu <= 1:
            raise ValueError(f"nu must exceed 1 for the mean to exist, got {self.nu}")


def student_abs_mean(nu: float) -> float:
    """E|T| for T ~ Student(nu), nu > 1."""
    if nu <= 1:
        raise ValueError("E|T| is infinite for nu <= 1")
    log_ratio = gammaln((nu + 1) / 2) - gammaln(nu / 2)
    return 2.0 * math.sqrt(nu) * math.exp(log_ratio) / ((nu - 1) * math.sqrt(math.pi))


def skew_t_mean(params: SkewTParams) -> float:
    return (params.xi - 1.0 / params.xi) * params.sigma * student_abs_mean(params.nu) + params.kappa


def sample_skew_t_noise(n: int, params: SkewTParams, rng: np.random.Generator) -> np.ndarray:
    """Mean-zero draws of the two-piece skew Student law.

    The positive half is stretched by ``xi`` and the negative half shrunk by
    ``1/xi``; ``xi = 1`` gives the symmetric Student law scaled by ``sigma``.
    """
    a = np.abs(rng.standard_t(params.nu, size=n))
    xi = params.xi
    positive = rng.random(n) < xi**2 / (1.0 + xi**2)
    x = np.where(positive, params.sigma * xi * a, -params.sigma * a / xi)
    return x + params.kappa - skew_t_mean(params)


# ---------------------------------------------------------------------------
# Set estimation: uniform rings


def sample_uniform_ring(n: int, r: float, R: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform points on the annulus ``r <= |x| <= R``."""
    if not 0 <= r < R:
        raise ValueError(f"need 0 <= r < R, got r={r}, R={R}")
    theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
    rho = np.sqrt(rng.random(n) * (R**2 - r**2) + r**2)
    return np.column_stack([rho * np.cos(theta), rho * np.sin(theta)])


def sample_ring_mixture(n: int, lam: float, rng: np.random.Generator,
                        inner=(0.0, 1.0), outer=(1.0, 1.25)) -> tuple[np.ndarray, np.ndarray]:
    """``(1 - lam) D(0, 1) + lam D(1, 1.25)``; returns points and the outlier mask."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    outlier = rng.random(n) < lam
    X = np.empty((n, 2))
    X[~outlier] = sample_uniform_ring(int((~outlier).sum()), *inner, rng)
    X[outlier] = sample_uniform_ring(int(outlier.sum()), *outer, rng)
    return X, outlier


# ---------------------------------------------------------------------------
# Topology: circle samples and a Matern cluster process


def sample_circle(n: int, rng: np.random.Generator) -> np.ndarray:
    theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return np.column_stack([np.cos(theta), np.sin(theta)])


def sample_matern_cluster(intensity: float, radius: float, mean_children: float,
                          rng: np.random.Generator,
                          window=((-0.5, 0.5), (-0.5, 0.5))) -> tuple[np.ndarray, np.ndarray]:
    """Matern cluster process on a rectangular window, without edge correction.

    Returns ``(parents, children)``; children are uniform in the disc of
    ``radius`` around their parent.
    """
    (x0, x1), (y0, y1) = window
    n_parents = rng.poisson(intensity * (x1 - x0) * (y1 - y0))
    parents = np.column_stack([rng.uniform(x0, x1, n_parents), rng.uniform(y0, y1, n_parents)])
    counts = rng.poisson(mean_children, size=n_parents)
    offsets = sample_uniform_ring(int(counts.sum()), 0.0, radius, rng)
    children = np.repeat(parents, counts, axis=0) + offsets
    return parents, children


@dataclass(frozen=True)
class CircleScenarios:
    baseline: np.ndarray
    scenario1: np.ndarray
    scenario2: np.ndarray


def sample_circle_scenarios(rng: np.random.Generator, n: int = 600, noise_sd: float = 0.05,
                            outlier_fraction: float = 0.1, intensity: float = 3.0,
                            cluster_radius: float = 0.25, mean_children: float = 20.0) -> CircleScenarios:
    """Baseline circle sample, its Gaussian perturbation, and the perturbation
    with a fraction replaced by Matern clusters.

    The cluster part is resampled to exactly ``round(n * outlier_fraction)``
    points so all three samples have ``n`` points; empty cluster draws are
    redrawn.
    """
    baseline = sample_circle(n, rng)
    scenario1 = baseline + noise_sd * rng.standard_normal(baseline.shape)
    n_out = int(round(n * outlier_fraction))
    keep = rng.choice(n, size=n - n_out, replace=False)
    children = np.zeros((0, 2))
    while len(children) == 0:
        _, children = sample_matern_cluster(intensity, cluster_radius, mean_children, rng)
    pick = rng.choice(len(children), size=n_out, replace=len(children) < n_out)
    scenario2 = np.vstack([scenario1[np.sort(keep)], children[pick]])
    return CircleScenarios(baseline, scenario1, scenario2)


# ---------------------------------------------------------------------------
# Bandits


def sample_student_rewards(arm_mean: float, df: float, n: int, rng: np.random.Generator) -> np.ndarray:
    return arm_mean + rng.standard_t(df, size=n)
