"""Nadaraya-Watson regression and its robust aggregation (RANW).

Two aggregations of the per-group curves are provided: the global one selects
a whole candidate curve under the discretised L2 distance, the pointwise one
runs the selection separately at every grid node, which realises the class of
functions piecewise equal to one of the candidates at grid resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CandidatePool, partition_indices, select_index, select_on_line
from .metrics import GridFunction, l2_grid_distance, trapezoid_weights

_UNDERFLOW = 1e-300


def uniform_grid(a: float, b: float, size: int = 501) -> np.ndarray:
    return np.linspace(a, b, size)


def gaussian_kernel_weights(xs, nodes, h: float) -> np.ndarray:
    """Matrix ``K_h(X_i - x)`` with rows indexed by grid node."""
    if h <= 0:
        raise ValueError("bandwidth must be positive")
    u = (np.asarray(nodes, dtype=float)[:, None] - np.asarray(xs, dtype=float)[None, :]) / h
    return np.exp(-0.5 * u * u) / (h * math.sqrt(2.0 * math.pi))


def _nw_from_weights(W, xs, ys, nodes) -> np.ndarray:
    den = W.sum(axis=1)
    out = (W @ ys) / np.where(den < _UNDERFLOW, 1.0, den)
    far = den < _UNDERFLOW
    if far.any():
        # no kernel mass: fall back to the response of the nearest design point
        nearest = np.argmin(np.abs(nodes[far, None] - xs[None, :]), axis=1)
        out[far] = ys[nearest]
    return out


def nw_estimate(xs, ys, h: float, nodes) -> GridFunction:
    """Nadaraya-Watson estimate with a Gaussian kernel, evaluated at ``nodes``."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) == 0 or len(xs) != len(ys):
        raise ValueError("need a non-empty sample with matching xs and ys")
    nodes = np.asarray(nodes, dtype=float)
    W = gaussian_kernel_weights(xs, nodes, h)
    return GridFunction.from_nodes(nodes, _nw_from_weights(W, xs, ys, nodes))


@dataclass
class RanwFit:
    global_estimate: GridFunction
    pointwise: GridFunction
    candidates: list[GridFunction]
    selected_index: int


def ranw_fit(xs, ys, K_groups: int, h: float, nodes, rng: np.random.Generator) -> RanwFit:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) == 0 or len(xs) != len(ys):
        raise ValueError("need a non-empty sample with matching xs and ys")
    nodes = np.asarray(nodes, dtype=float)
    groups = partition_indices(len(xs), K_groups, rng)
    W = gaussian_kernel_weights(xs, nodes, h)
    curves = np.array([_nw_from_weights(W[:, g], xs[g], ys[g], nodes) for g in groups])
    candidates = [GridFunction.from_nodes(nodes, c) for c in curves]
    sel = select_index(CandidatePool(candidates, l2_grid_distance))
    _, pointwise = select_on_line(curves, axis=0)
    return RanwFit(candidates[sel.selected_index], GridFunction.from_nodes(nodes, pointwise),
                   candidates, sel.selected_index)


def bandwidth_rule(n: int, K_groups: int, d: int = 1, c_prime: float = 1.0) -> float:
    """Bandwidth ``c' (K / n)^(1 / (d + 2))`` balancing variance and bias per group."""
    if not (n >= K_groups >= 1 and d >= 1 and c_prime > 0):
        raise ValueError("need n >= K >= 1, d >= 1 and c' > 0")
    return c_prime * (K_groups / n) ** (1.0 / (d + 2))


def regression_function(x):
    return 4.0 * np.sin(3.0 * x)


def d2_error(estimate: GridFunction, truth=regression_function) -> float:
    """Discretised L2 distance to the true function under the uniform design."""
    diff2 = (estimate.values - truth(estimate.nodes)) ** 2
    return math.sqrt(float(trapezoid_weights(len(diff2)) @ diff2))
