"""Minimum-weight perfect matching decoder for X-syndromes.

Every defect gets its own virtual boundary node; boundary nodes are joined to
each other at weight zero so a perfect matching always exists.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .blossom import MatchStats, max_weight_matching
from .lattice import CodeLattice, check_syndrome, syndrome_defects


class MatchingError(ValueError):
    pass


@dataclass(frozen=True)
class DefectGraph:
    n_data: int
    defects: tuple[int, ...]
    # weights[a][b]: lattice distance between defects a and b
    weights: np.ndarray = field(repr=False)
    # boundary_weights[a]: distance from defect a to its nearest rough boundary
    boundary_weights: np.ndarray = field(repr=False)
    # paths[(a, b)] / paths[(a, None)]: qubits of one shortest chain
    paths: dict = field(repr=False)

    @property
    def n_defects(self) -> int:
        return len(self.defects)

    def pair_path(self, a: int, b: int | None) -> tuple[int, ...]:
        if b is None:
            return self.paths[(a, None)]
        return self.paths[(min(a, b), max(a, b))]


def _bfs(lat: CodeLattice, src: int):
    """Distances and parent links from vertex ``src``; node ``-1`` is the boundary."""
    dist = {src: 0}
    prev: dict[int, tuple[int, int]] = {}
    bdist = None
    bprev = None
    dq = deque([src])
    while dq:
        v = dq.popleft()
        for q in lat.vertex_support[v]:
            inc = lat.qubit_incidence[q]
            if len(inc) == 1:
                if bdist is None:
                    bdist = dist[v] + 1
                    bprev = (v, q)
                continue
            w = inc[0] if inc[1] == v else inc[1]
            if w not in dist:
                dist[w] = dist[v] + 1
                prev[w] = (v, q)
                dq.append(w)
    return dist, prev, bdist, bprev


def _trace(prev, src: int, v: int, tail: list[int]) -> tuple[int, ...]:
    qubits = list(tail)
    while v != src:
        v, q = prev[v]
        qubits.append(q)
    return tuple(sorted(qubits))


def build_defect_graph(lat: CodeLattice, s) -> DefectGraph:
    s = check_syndrome(lat, s)
    defects = tuple(int(v) for v in syndrome_defects(s))
    k = len(defects)
    weights = np.zeros((k, k), dtype=np.int64)
    bweights = np.zeros(k, dtype=np.int64)
    paths: dict = {}
    for a, va in enumerate(defects):
        dist, prev, bdist, bprev = _bfs(lat, va)
        bweights[a] = bdist
        paths[(a, None)] = _trace(prev, va, bprev[0], [bprev[1]])
        for b in range(a + 1, k):
            vb = defects[b]
            weights[a, b] = weights[b, a] = dist[vb]
            paths[(a, b)] = _trace(prev, va, vb, [])
    return DefectGraph(lat.n_data, defects, weights, bweights, paths)


def _matching_edges(g: DefectGraph):
    """Edges for max-weight matching whose optimum is the min-weight perfect matching."""
    k = g.n_defects
    top = int(max(g.weights.max(initial=0), g.boundary_weights.max(initial=0))) + 1
    edges = []
    for a in range(k):
        for b in range(a + 1, k):
            edges.append((a, b, top - int(g.weights[a, b])))
        edges.append((a, k + a, top - int(g.boundary_weights[a])))
    for a in range(k):
        for b in range(a + 1, k):
            edges.append((k + a, k + b, top))
    return edges


def match_defects(g: DefectGraph) -> tuple[list[tuple[int, int | None]], int, MatchStats]:
    """Min-weight pairing: list of (a, b) or (a, None) for boundary matches."""
    k = g.n_defects
    stats = MatchStats()
    if k == 0:
        return [], 0, stats
    mate = max_weight_matching(_matching_edges(g), max_cardinality=True, stats=stats)
    pairs: list[tuple[int, int | None]] = []
    total = 0
    for a in range(k):
        m = mate[a]
        if m < 0:
            raise MatchingError("matcher returned an imperfect matching")
        if m >= k:
            pairs.append((a, None))
            total += int(g.boundary_weights[a])
        elif a < m:
            pairs.append((a, m))
            total += int(g.weights[a, m])
    return pairs, total, stats


def mwpm_decode(g: DefectGraph) -> tuple[np.ndarray, int]:
    """Correction pattern and the number of edge scans made by the matcher."""
    pairs, _, stats = match_defects(g)
    e = np.zeros(g.n_data, dtype=np.uint8)
    for a, b in pairs:
        for q in g.pair_path(a, b):
            e[q] ^= 1
    return e, stats.edge_scans


def matching_weight(g: DefectGraph) -> int:
    return match_defects(g)[1]


def brute_force_matching(g: DefectGraph, limit: int = 10) -> int:
    """Exhaustive minimum over all pairings of defects, each either paired or sent to the boundary."""
    k = g.n_defects
    if k > limit:
        raise MatchingError(f"brute force limited to {limit} defects, got {k}")
    W = g.weights.tolist()
    B = g.boundary_weights.tolist()

    def best(rest: tuple[int, ...]) -> int:
        if not rest:
            return 0
        a, tail = rest[0], rest[1:]
        value = B[a] + best(tail)
        for idx, b in enumerate(tail):
            value = min(value, W[a][b] + best(tail[:idx] + tail[idx + 1:]))
        return value

    return best(tuple(range(k)))
