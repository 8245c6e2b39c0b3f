"""Concrete (pseudo)metrics: discretised L2 on grids, Hausdorff between convex
polygons, and the 1-Wasserstein distance between persistence diagrams."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment


@dataclass(frozen=True)
class GridFunction:
    """Real function sampled on the uniform grid ``start + step * arange(len(values))``."""

    start: float
    step: float
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.step <= 0 or self.values.ndim != 1 or len(self.values) < 2:
            raise ValueError("grid needs a positive step and at least two nodes")

    @classmethod
    def from_nodes(cls, nodes, values) -> "GridFunction":
        nodes = np.asarray(nodes, dtype=float)
        return cls(float(nodes[0]), float(nodes[1] - nodes[0]), values)

    @property
    def nodes(self) -> np.ndarray:
        return self.start + self.step * np.arange(len(self.values))

    def compatible(self, other: "GridFunction") -> bool:
        return (self.start == other.start and self.step == other.step
                and len(self.values) == len(other.values))


def trapezoid_weights(size: int) -> np.ndarray:
    """Trapezoid weights normalised to sum to one (mean over the span)."""
    w = np.ones(size)
    w[0] = w[-1] = 0.5
    return w / (size - 1)


def l2_grid_distance(f: GridFunction, g: GridFunction) -> float:
    """Root of the trapezoid mean of ``(f - g)^2`` over the grid span."""
    if not f.compatible(g):
        raise ValueError("grid functions live on different grids")
    diff2 = (f.values - g.values) ** 2
    return math.sqrt(float(trapezoid_weights(len(diff2)) @ diff2))


# ---------------------------------------------------------------------------
# Convex polygons


def _cross(o, a, b) -> np.ndarray:
    return (a[..., 0] - o[..., 0]) * (b[..., 1] - o[..., 1]) - (a[..., 1] - o[..., 1]) * (b[..., 0] - o[..., 0])


@dataclass(frozen=True)
class ConvexPolygon:
    """Filled convex polygon given by its vertices in counter-clockwise order.

    One or two vertices describe a point or a segment.
    """

    vertices: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "vertices", V)
        if len(V) == 0:
            raise ValueError("polygon needs at least one vertex")
        if len(V) >= 3:
            turns = _cross(V, np.roll(V, -1, axis=0), np.roll(V, -2, axis=0))
            if np.any(turns <= 0):
                raise ValueError("vertices are not in strictly convex counter-clockwise position")

    def __len__(self):
        return len(self.vertices)

    def contains(self, points) -> np.ndarray:
        """Boolean mask of points lying in the closed polygon (2-D bodies only)."""
        P = np.asarray(points, dtype=float).reshape(-1, 2)
        V = self.vertices
        if len(V) < 3:
            return np.zeros(len(P), dtype=bool)
        a, b = V, np.roll(V, -1, axis=0)
        return np.all(_cross(a[None], b[None], P[:, None]) >= 0, axis=1)

    def distance_from(self, points) -> np.ndarray:
        """Euclidean distance from each point to the polygon (0 inside)."""
        P = np.asarray(points, dtype=float).reshape(-1, 2)
        V = self.vertices
        if len(V) == 1:
            return np.linalg.norm(P - V[0], axis=1)
        if len(V) == 2:
            a, b = V[:1], V[1:]
        else:
            a, b = V, np.roll(V, -1, axis=0)
        d = _segment_distances(P, a, b).min(axis=1)
        d[self.contains(P)] = 0.0
        return d


def _segment_distances(P, a, b) -> np.ndarray:
    """Matrix of distances from points ``P`` to segments ``[a_k, b_k]``."""
    ab = b - a
    ap = P[:, None, :] - a[None, :, :]
    denom = np.einsum("kd,kd->k", ab, ab)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.einsum("nkd,kd->nk", ap, ab) / denom
    t = np.where(denom > 0, np.clip(t, 0.0, 1.0), 0.0)
    closest = a[None] + t[..., None] * ab[None]
    return np.linalg.norm(P[:, None, :] - closest, axis=2)


def hausdorff_distance(A: ConvexPolygon, B: ConvexPolygon) -> float:
    """Hausdorff distance between two filled convex polygons.

    The distance to a convex set is a convex function, so each directed
    distance is attained at a vertex.
    """
    return float(max(B.distance_from(A.vertices).max(), A.distance_from(B.vertices).max()))


def regular_polygon(num_vertices: int, radius: float = 1.0) -> ConvexPolygon:
    """Regular polygon inscribed in the circle of given radius, first vertex at angle 0."""
    theta = 2.0 * np.pi * np.arange(num_vertices) / num_vertices
    return ConvexPolygon(radius * np.column_stack([np.cos(theta), np.sin(theta)]))


# ---------------------------------------------------------------------------
# Persistence diagrams


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of (dimension, birth, death) points; essential classes die at ``inf``."""

    dims: np.ndarray
    births: np.ndarray
    deaths: np.ndarray

    def __post_init__(self):
        dims = np.asarray(self.dims, dtype=np.int64).ravel()
        births = np.asarray(self.births, dtype=float).ravel()
        deaths = np.asarray(self.deaths, dtype=float).ravel()
        if not len(dims) == len(births) == len(deaths):
            raise ValueError("dims, births and deaths must have equal length")
        if np.any(dims < 0) or np.any(deaths < births):
            raise ValueError("invalid diagram point (negative dimension or death < birth)")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "births", births)
        object.__setattr__(self, "deaths", deaths)

    @classmethod
    def from_points(cls, points) -> "PersistenceDiagram":
        """Build from an iterable of ``(dimension, birth, death)`` triples."""
        arr = np.asarray(list(points), dtype=float).reshape(-1, 3)
        return cls(arr[:, 0].astype(np.int64), arr[:, 1], arr[:, 2])

    @classmethod
    def empty(cls) -> "PersistenceDiagram":
        return cls(np.zeros(0, np.int64), np.zeros(0), np.zeros(0))

    def __len__(self):
        return len(self.dims)

    def points(self, dim: int) -> np.ndarray:
        """(birth, death) rows of one dimension."""
        sel = self.dims == dim
        return np.column_stack([self.births[sel], self.deaths[sel]])

    def finite(self) -> "PersistenceDiagram":
        keep = np.isfinite(self.deaths)
        return PersistenceDiagram(self.dims[keep], self.births[keep], self.deaths[keep])

    def restrict(self, dims) -> "PersistenceDiagram":
        keep = np.isin(self.dims, list(dims))
        return PersistenceDiagram(self.dims[keep], self.births[keep], self.deaths[keep])

    def to_csv(self, path=None) -> str:
        """Write as CSV with columns ``dimension,birth,death`` (``inf`` for essential)."""
        buf = io.StringIO(newline="")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["dimension", "birth", "death"])
        for d, b, e in zip(self.dims, self.births, self.deaths):
            w.writerow([int(d), repr(float(b)), "inf" if math.isinf(e) else repr(float(e))])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text, newline="")
        return text

    @classmethod
    def from_csv(cls, source) -> "PersistenceDiagram":
        """Read the CSV written by :meth:`to_csv` from a path or a text string."""
        text = source if isinstance(source, str) and "\n" in source else Path(source).read_text()
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls([int(r["dimension"]) for r in rows],
                   [float(r["birth"]) for r in rows],
                   [float(r["death"]) for r in rows])


def _diagram_cost_matrix(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Augmented (|P|+|Q|)-square cost matrix for matching with the diagonal."""
    p, q = len(P), len(Q)
    C = np.zeros((p + q, p + q))
    if p and q:
        C[:p, :q] = np.max(np.abs(P[:, None, :] - Q[None, :, :]), axis=2)
    # a point may only go to its own diagonal projection
    C[:p, q:] = np.inf
    C[p:, :q] = np.inf
    C[np.arange(p), q + np.arange(p)] = (P[:, 1] - P[:, 0]) / 2.0
    C[p + np.arange(q), np.arange(q)] = (Q[:, 1] - Q[:, 0]) / 2.0
    return C


def matching_cost(P: np.ndarray, Q: np.ndarray) -> float:
    """Optimal 1-Wasserstein matching cost between two finite point sets."""
    if len(P) == 0 and len(Q) == 0:
        return 0.0
    C = _diagram_cost_matrix(P, Q)
    rows, cols = linear_sum_assignment(C)
    # fsum is exactly rounded, so the value does not depend on matching order
    return math.fsum(C[rows, cols].tolist())


def wasserstein1_distance(P: PersistenceDiagram, Q: PersistenceDiagram) -> float:
    """1-Wasserstein distance between diagrams, summed over dimensions.

    Ground cost is the L-infinity distance in the (birth, death) plane and a
    point can be sent to the diagonal at cost ``(death - birth) / 2``. Essential
    points must come in equal numbers per dimension; they are paired by sorted
    birth and cost ``|b - b'|``.
    """
    total = []
    for dim in np.union1d(P.dims, Q.dims):
        A, B = P.points(dim), Q.points(dim)
        ea, eb = np.isinf(A[:, 1]), np.isinf(B[:, 1])
        if ea.sum() != eb.sum():
            raise ValueError(f"essential classes differ in dimension {dim}: {ea.sum()} vs {eb.sum()}")
        total.extend(np.abs(np.sort(A[ea, 0]) - np.sort(B[eb, 0])).tolist())
        total.append(matching_cost(A[~ea], B[~eb]))
    return math.fsum(total)
