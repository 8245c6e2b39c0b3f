"""Robust aggregation of group estimators by nearest-neighbour depth.

The sample is split into ``K`` groups, one estimator is built per group and
the estimators are combined by minimising the depth functional

    depth(nu) = m-th smallest of d(mu_1, nu), ..., d(mu_K, nu),   m = floor(K q) + 1

over a search pool (the candidates themselves in the practical version).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
from scipy.spatial.distance import cdist

Metric = Callable[[Any, Any], float]


def euclidean(a, b) -> float:
    """Euclidean distance between two scalars or vectors."""
    return float(np.linalg.norm(np.subtract(a, b, dtype=float)))


def absolute(a: float, b: float) -> float:
    return abs(float(a) - float(b))


def depth_order(K: int, q: float = 0.5) -> int:
    """Order ``m = floor(K q) + 1`` of the nearest neighbour defining the depth."""
    if K < 1:
        raise ValueError(f"need at least one candidate, got K={K}")
    if not 0.5 <= q <= 1.0:
        raise ValueError(f"q must lie in [1/2, 1], got {q}")
    return min(int(math.floor(K * q)) + 1, K)


@dataclass
class CandidatePool:
    """The K group estimators together with the metric used to compare them.

    ``metric`` is either a callable ``(a, b) -> float`` or the string
    ``"euclidean"``, in which case the candidates are stacked into an array and
    distances are computed in one vectorised call.
    """

    candidates: Sequence[Any]
    metric: Metric | str = "euclidean"
    q: float = 0.5
    _matrix: np.ndarray | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.candidates) < 1:
            raise ValueError("candidate pool is empty")
        self.m = depth_order(len(self.candidates), self.q)

    @property
    def K(self) -> int:
        return len(self.candidates)

    def distances_to(self, point) -> np.ndarray:
        """Distances from every candidate to ``point``, in candidate order."""
        if isinstance(self.metric, str):
            X = _as_rows(self.candidates)
            p = np.asarray(point, dtype=float).reshape(1, -1)
            return cdist(X, p, metric=self.metric)[:, 0]
        return np.array([self.metric(c, point) for c in self.candidates], dtype=float)

    def distance_matrix(self) -> np.ndarray:
        """Symmetric K x K matrix of candidate distances, computed once.

        A callable metric is evaluated K(K-1)/2 times (upper triangle only).
        """
        if self._matrix is None:
            if isinstance(self.metric, str):
                X = _as_rows(self.candidates)
                D = cdist(X, X, metric=self.metric)
                np.fill_diagonal(D, 0.0)
            else:
                K = self.K
                D = np.zeros((K, K))
                for i in range(K):
                    for j in range(i + 1, K):
                        D[i, j] = D[j, i] = self.metric(self.candidates[i], self.candidates[j])
            self._matrix = D
        return self._matrix


def _as_rows(candidates) -> np.ndarray:
    X = np.asarray(candidates, dtype=float)
    return X.reshape(len(X), -1)


@dataclass(frozen=True)
class GrosSelection:
    selected_index: int
    selected_depth: float
    depth_profile: np.ndarray


def choose_k(delta: float) -> int:
    """Number of groups ``ceil(8 log(1/delta))`` giving confidence ``1 - delta``."""
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return max(1, math.ceil(8.0 * math.log(1.0 / delta)))


def partition_indices(n: int, K: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Random balanced partition of ``range(n)`` into ``K`` groups.

    The indices are shuffled and dealt round-robin, so group sizes differ by at
    most one and the first ``n % K`` groups get the extra element.
    """
    if not 1 <= K <= n:
        raise ValueError(f"need 1 <= K <= n, got K={K}, n={n}")
    perm = rng.permutation(n)
    return [perm[j::K] for j in range(K)]


def depth(point, pool: CandidatePool) -> float:
    """m-th smallest distance from ``point`` to the candidates."""
    d = pool.distances_to(point)
    return float(np.partition(d, pool.m - 1)[pool.m - 1])


def select_index(pool: CandidatePool) -> GrosSelection:
    """Candidate of minimal depth; ties go to the smallest index.

    The candidate's own zero distance counts among its neighbours.
    """
    D = pool.distance_matrix()
    profile = np.partition(D, pool.m - 1, axis=0)[pool.m - 1]
    j = int(np.argmin(profile))
    return GrosSelection(j, float(profile[j]), profile)


def minimize_over_pool(search_pool: Sequence[Any], pool: CandidatePool) -> tuple[Any, float]:
    """First element of ``search_pool`` with minimal depth, and that depth."""
    if len(search_pool) == 0:
        raise ValueError("search pool is empty")
    best, best_depth = None, math.inf
    for nu in search_pool:
        dn = depth(nu, pool)
        if dn < best_depth:
            best, best_depth = nu, dn
    return best, best_depth


def binomial_tail_bound(K: int, p: float) -> float:
    """Hoeffding bound ``exp(-2 (floor(K/2) - K p)^2 / K)`` on P(Bin(K, p) >= floor(K/2))."""
    if K < 1 or not 0.0 < p < 1.0:
        raise ValueError(f"need K >= 1 and p in (0, 1), got K={K}, p={p}")
    half = K // 2
    if K * p > half:
        raise ValueError(f"bound requires K p <= floor(K/2), got K p = {K * p}")
    return math.exp(-2.0 * (half - K * p) ** 2 / K)


# ---------------------------------------------------------------------------
# Real-line shortcuts. Both agree with the generic routines above and exist
# because the bandit, regression and Monte-Carlo drivers call them in bulk.


def select_on_line(values, q: float = 0.5, axis: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Batched :func:`select_index` for real candidates under ``|a - b|``.

    ``values`` holds the K candidates along ``axis``; every other axis indexes an
    independent problem. Returns ``(selected_index, selected_value)``.
    """
    V = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
    K = V.shape[0]
    m = depth_order(K, q)
    D = np.abs(V[:, None, ...] - V[None, :, ...])
    profile = np.partition(D, m - 1, axis=0)[m - 1]
    j = np.argmin(profile, axis=0)
    return j, np.take_along_axis(V, j[None, ...], axis=0)[0]


def minimize_on_line(values, q: float = 0.5) -> tuple[float, float]:
    """Exact minimiser of the depth over the whole real line.

    The depth of ``nu`` is the radius of the smallest interval centred at ``nu``
    holding ``m`` candidates, so the minimiser is the midpoint of the shortest
    window of ``m`` consecutive order statistics (first such window on ties).
    """
    x = np.sort(np.asarray(values, dtype=float).ravel())
    m = depth_order(len(x), q)
    widths = x[m - 1:] - x[: len(x) - m + 1]
    i = int(np.argmin(widths))
    return 0.5 * (x[i] + x[i + m - 1]), 0.5 * float(widths[i])
