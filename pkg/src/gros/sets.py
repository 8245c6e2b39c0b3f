"""Convex-hull support estimation and the GROS-selected hull (RChull)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import CandidatePool, partition_indices, select_index
from .metrics import ConvexPolygon, hausdorff_distance, regular_polygon


def convex_hull(points) -> ConvexPolygon:
    """Andrew's monotone chain; collinear boundary points are dropped."""
    P = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(P) == 0:
        raise ValueError("cannot take the hull of an empty point set")
    if len(P) <= 2:
        return ConvexPolygon(P)
    pts = [tuple(p) for p in P]  # np.unique sorts lexicographically

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        hull = hull[:1]
    return ConvexPolygon(np.array(hull))


@dataclass
class HullEstimate:
    polygon: ConvexPolygon
    source: str


@dataclass
class RChullFit:
    selected: HullEstimate
    candidates: list[HullEstimate]
    full: HullEstimate
    selected_index: int


def rchull_fit(points, K_groups: int, rng: np.random.Generator) -> RChullFit:
    """Hull of each of ``K_groups`` random groups and the GROS pick under Hausdorff."""
    X = np.asarray(points, dtype=float)
    groups = partition_indices(len(X), K_groups, rng)
    candidates = [HullEstimate(convex_hull(X[g]), f"group {j}") for j, g in enumerate(groups)]
    sel = select_index(CandidatePool([c.polygon for c in candidates], hausdorff_distance))
    chosen = candidates[sel.selected_index]
    return RChullFit(HullEstimate(chosen.polygon, "gros_selected"), candidates,
                     HullEstimate(convex_hull(X), "full_sample"), sel.selected_index)


@lru_cache(maxsize=4)
def _disk(num_vertices: int) -> ConvexPolygon:
    return regular_polygon(num_vertices)


def hausdorff_to_unit_disk(polygon: ConvexPolygon, num_vertices: int = 3600) -> float:
    """Hausdorff distance to the unit disk, approximated by an inscribed regular polygon.

    The approximation error is at most ``1 - cos(pi / num_vertices)``.
    """
    return hausdorff_distance(polygon, _disk(num_vertices))
