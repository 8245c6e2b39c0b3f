"""Vietoris-Rips persistence in dimensions 0 and 1, and the robust diagram.

H0 comes from union-find over the sorted edges. H1 comes from reducing the
coboundary matrix of edges (cohomology) over Z/2, processing edges from the
largest down. Edges that kill an H0 class are cleared, and a column whose
smallest cofacet is not yet claimed is paired without materialising it,
which handles almost every column of a dense Rips complex.

Simplex order: edges by ``(length, i, j)``; a triangle is keyed by the rank
of its longest edge and then by the vertex opposite that edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
from scipy.spatial.distance import pdist

from .core import CandidatePool, partition_indices, select_index
from .metrics import PersistenceDiagram, wasserstein1_distance

MAX_POINTS = 700


class ResourceLimitError(RuntimeError):
    """Input too large for the dense Rips construction."""


@dataclass
class RipsFiltration:
    points: np.ndarray
    edges: np.ndarray  # (E, 2) vertex pairs i < j, sorted by (length, i, j)
    lengths: np.ndarray
    threshold: float

    @classmethod
    def build(cls, points, threshold: float) -> "RipsFiltration":
        X = np.asarray(points, dtype=float).reshape(len(points), -1)
        n = len(X)
        iu, ju = np.triu_indices(n, k=1)
        lengths = pdist(X) if n > 1 else np.zeros(0)
        keep = lengths <= threshold
        iu, ju, lengths = iu[keep], ju[keep], lengths[keep]
        order = np.lexsort((ju, iu, lengths))
        return cls(X, np.column_stack([iu[order], ju[order]]), lengths[order], threshold)

    def rank_matrix(self) -> np.ndarray:
        n = len(self.points)
        R = np.full((n, n), -1, dtype=np.int64)
        r = np.arange(len(self.edges))
        R[self.edges[:, 0], self.edges[:, 1]] = r
        R[self.edges[:, 1], self.edges[:, 0]] = r
        return R


@numba.njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


@numba.njit(cache=True)
def _h0(n, edges):
    """Union-find pass; returns the death ranks (MST edges in order)."""
    parent = np.arange(n)
    deaths = np.empty(max(n - 1, 0), dtype=np.int64)
    k = 0
    for r in range(edges.shape[0]):
        a = _find(parent, edges[r, 0])
        b = _find(parent, edges[r, 1])
        if a != b:
            parent[max(a, b)] = min(a, b)
            deaths[k] = r
            k += 1
    return deaths[:k]


@numba.njit(cache=True)
def _toggle_cofacets(bits, r, edges, R, n):
    """XOR the coboundary of edge ``r`` into the bitset over triangle keys."""
    a = edges[r, 0]
    b = edges[r, 1]
    for v in range(n):
        ra = R[a, v]
        rb = R[b, v]
        if v == a or v == b or ra < 0 or rb < 0:
            continue
        if r >= ra and r >= rb:
            key = r * n + v
        elif ra >= rb:
            key = ra * n + b
        else:
            key = rb * n + a
        bits[key >> 6] ^= np.uint64(1) << np.uint64(key & 63)


@numba.njit(cache=True)
def _next_set_bit(bits, start):
    """Smallest set key >= ``start``, or -1."""
    w = start >> 6
    if w >= bits.shape[0]:
        return -1
    word = bits[w] >> np.uint64(start & 63)
    if word:
        return start + _lowest_bit(word)
    for w in range(w + 1, bits.shape[0]):
        if bits[w]:
            return (w << 6) + _lowest_bit(bits[w])
    return -1


@numba.njit(cache=True)
def _lowest_bit(word):
    k = 0
    while not (word >> np.uint64(k)) & np.uint64(1):
        k += 1
    return k


@numba.njit(cache=True)
def _min_cofacet(r, edges, R, n):
    a = edges[r, 0]
    b = edges[r, 1]
    best = -1
    for v in range(n):
        ra = R[a, v]
        rb = R[b, v]
        if v == a or v == b or ra < 0 or rb < 0:
            continue
        if r >= ra and r >= rb:
            # keys r * n + v are the smallest possible and v only grows
            key = r * n + v
            if best < 0 or key < best:
                best = key
            break
        elif ra >= rb:
            key = ra * n + b
        else:
            key = rb * n + a
        if best < 0 or key < best:
            best = key
    return best


@numba.njit(cache=True)
def _h1(n, edges, lengths, R, cleared):
    """Pairs (birth edge rank, death triangle key); key -1 marks an essential class."""
    E = edges.shape[0]
    pivot_owner = numba.typed.Dict.empty(numba.types.int64, numba.types.int64)
    # reduction columns stored flat: column c is vflat[vstart[c]:vstart[c + 1]]
    vflat = np.empty(max(E, 1), dtype=np.int64)
    vstart = np.zeros(E + 1, dtype=np.int64)
    ncols = 0
    nflat = 0
    births = np.empty(E, dtype=np.int64)
    deaths = np.empty(E, dtype=np.int64)
    npairs = 0
    bits = np.zeros(1, dtype=np.uint64)
    for r in range(E - 1, -1, -1):
        if cleared[r]:
            continue
        key = _min_cofacet(r, edges, R, n)
        column = np.empty(1, dtype=np.int64)
        column[0] = r
        if key >= 0 and key in pivot_owner:
            # Working coboundary as a bitset. Added columns have entries no
            # smaller than the pivot they cancel, so the pivot only moves up.
            if bits.shape[0] == 1:
                bits = np.zeros((E * n + 63) // 64, dtype=np.uint64)
            _toggle_cofacets(bits, r, edges, R, n)
            while key >= 0 and key in pivot_owner:
                c = pivot_owner[key]
                other = vflat[vstart[c]:vstart[c + 1]]
                for e in other:
                    _toggle_cofacets(bits, e, edges, R, n)
                column = np.concatenate((column, other))
                key = _next_set_bit(bits, key)
            column = _cancel_pairs(column)
            for e in column:
                _toggle_cofacets(bits, e, edges, R, n)
        if key >= 0:
            if nflat + column.shape[0] > vflat.shape[0]:
                bigger = np.empty(2 * (nflat + column.shape[0]), dtype=np.int64)
                bigger[:nflat] = vflat[:nflat]
                vflat = bigger
            vflat[nflat:nflat + column.shape[0]] = column
            nflat += column.shape[0]
            pivot_owner[key] = ncols
            ncols += 1
            vstart[ncols] = nflat
            if lengths[key // n] > lengths[r]:
                births[npairs] = r
                deaths[npairs] = key
                npairs += 1
        else:
            births[npairs] = r
            deaths[npairs] = -1
            npairs += 1
    return births[:npairs], deaths[:npairs]


@numba.njit(cache=True)
def _cancel_pairs(column):
    s = np.sort(column)
    out = np.empty_like(s)
    k = 0
    i = 0
    while i < s.shape[0]:
        j = i
        while j < s.shape[0] and s[j] == s[i]:
            j += 1
        if (j - i) % 2 == 1:
            out[k] = s[i]
            k += 1
        i = j
    return out[:k]


def rips_persistence(points, threshold: float, max_dim: int = 1, max_points: int = MAX_POINTS) -> PersistenceDiagram:
    """Persistence diagram of the Vietoris-Rips filtration up to ``threshold``.

    H0 keeps all ``n - 1`` finite bars (zero-length ones included) plus
    essential bars; H1 keeps bars of positive length, with ``inf`` death for
    cycles still alive at ``threshold``.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    n = len(points)
    if n == 0:
        raise ValueError("empty point set")
    if n > max_points:
        raise ResourceLimitError(f"{n} points exceed the Rips cap of {max_points}")
    filt = RipsFiltration.build(points, threshold)
    edges, lengths = filt.edges.astype(np.int64), filt.lengths
    h0 = _h0(n, edges)
    n_essential = n - len(h0)
    dims = [np.zeros(len(h0) + n_essential, dtype=np.int64)]
    births = [np.zeros(len(h0) + n_essential)]
    deaths = [np.concatenate([lengths[h0], np.full(n_essential, np.inf)])]
    if max_dim >= 1 and len(edges):
        cleared = np.zeros(len(edges), dtype=np.bool_)
        cleared[h0] = True
        b, d = _h1(n, edges, lengths, filt.rank_matrix(), cleared)
        order = np.argsort(b, kind="stable")
        b, d = b[order], d[order]
        dims.append(np.ones(len(b), dtype=np.int64))
        births.append(lengths[b])
        deaths.append(np.where(d >= 0, lengths[np.maximum(d, 0) // n], np.inf))
    return PersistenceDiagram(np.concatenate(dims), np.concatenate(births), np.concatenate(deaths))


def diagram_distance(P: PersistenceDiagram, Q: PersistenceDiagram) -> float:
    """W1 between the finite parts of two diagrams (essential classes excluded)."""
    return wasserstein1_distance(P.finite(), Q.finite())


@dataclass
class RobustDiagram:
    selected: PersistenceDiagram
    candidates: list[PersistenceDiagram]
    selected_index: int


def robust_diagram(points, K_groups: int, threshold: float, rng: np.random.Generator) -> RobustDiagram:
    """Diagram of each of ``K_groups`` random groups and the GROS pick under W1."""
    X = np.asarray(points, dtype=float)
    groups = partition_indices(len(X), K_groups, rng)
    candidates = [rips_persistence(X[g], threshold) for g in groups]
    sel = select_index(CandidatePool(candidates, diagram_distance))
    return RobustDiagram(candidates[sel.selected_index], candidates, sel.selected_index)
