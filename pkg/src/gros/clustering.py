"""Lloyd's k-means and RobustkM, which replaces each centroid update by the
GROS selection among group means of the cluster members."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import CandidatePool, partition_indices, select_index


@dataclass
class ClusterModel:
    centers: np.ndarray
    assignments: np.ndarray
    within_ss: float
    n_iter: int
    history: list[float]


def _assign(X, centers):
    d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(len(X)), labels]


def within_ss(X, centers) -> float:
    """Mean squared distance of each point to its nearest center."""
    return float(_assign(np.asarray(X, dtype=float), np.asarray(centers, dtype=float))[1].mean())


def initial_centers(X, k, rng) -> np.ndarray:
    """``k`` distinct sample points drawn uniformly without replacement."""
    X = np.asarray(X, dtype=float)
    if k > len(X):
        raise ValueError(f"k={k} exceeds the number of points {len(X)}")
    return X[rng.choice(len(X), size=k, replace=False)].copy()


def gros_center(points, K_groups: int, rng) -> np.ndarray:
    """GROS selection among the means of ``min(K_groups, len(points))`` random groups."""
    K = min(K_groups, len(points))
    if K == 1:
        return points.mean(axis=0)
    groups = partition_indices(len(points), K, rng)
    means = np.array([points[g].mean(axis=0) for g in groups])
    return means[select_index(CandidatePool(means, "euclidean")).selected_index]


def _lloyd(X, k, init_centers, max_iter, tol, rng, update):
    X = np.asarray(X, dtype=float)
    if k > len(X):
        raise ValueError(f"k={k} exceeds the number of points {len(X)}")
    centers = initial_centers(X, k, rng) if init_centers is None else np.array(init_centers, dtype=float)
    labels, d2 = _assign(X, centers)
    history = [float(d2.mean())]
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        new = centers.copy()
        taken = set()
        for j in range(k):
            members = np.flatnonzero(labels == j)
            if len(members) == 0:
                # re-seed with the worst-served point not already used
                for i in np.argsort(-d2, kind="stable"):
                    if i not in taken:
                        break
                taken.add(i)
                new[j] = X[i]
            else:
                new[j] = update(X[members], rng)
        shift = np.max(np.linalg.norm(new - centers, axis=1))
        centers = new
        labels, d2 = _assign(X, centers)
        history.append(float(d2.mean()))
        if shift < tol:
            break
    return ClusterModel(centers, labels, float(d2.mean()), n_iter, history)


def kmeans(points, k: int, init_centers=None, max_iter: int = 100, tol: float = 1e-6,
           rng: np.random.Generator | None = None) -> ClusterModel:
    """Plain Lloyd iterations with arithmetic-mean centroid updates."""
    rng = np.random.default_rng() if rng is None else rng
    return _lloyd(points, k, init_centers, max_iter, tol, rng, lambda P, _: P.mean(axis=0))


def robust_kmeans(points, k: int, K_groups: int = 10, init_centers=None, max_iter: int = 100,
                  tol: float = 1e-6, rng: np.random.Generator | None = None) -> ClusterModel:
    """k-means whose update step picks the GROS-selected group mean of each cluster.

    The groups inside a cluster are redrawn at every update.
    """
    if K_groups < 1:
        raise ValueError("K_groups must be at least 1")
    rng = np.random.default_rng() if rng is None else rng
    return _lloyd(points, k, init_centers, max_iter, tol, rng,
                  lambda P, r: gros_center(P, K_groups, r))


def classification_error(true_labels, predicted_labels, k: int) -> float:
    """Mismatch fraction minimised over the k! relabelings of the prediction.

    Labels are integers in ``0..k-1``.
    """
    if k > 6:
        raise ValueError("permutation matching is limited to k <= 6")
    t = np.asarray(true_labels)
    p = np.asarray(predicted_labels)
    confusion = np.zeros((k, k), dtype=np.int64)
    np.add.at(confusion, (t, p), 1)
    best = max(sum(confusion[perm[j], j] for j in range(k)) for perm in itertools.permutations(range(k)))
    return (len(t) - best) / len(t)
