import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfqubo.blossom import MatchStats, max_weight_matching
from surfqubo.lattice import build_lattice, extract_syndrome, sample_errors
from surfqubo.mwpm import (
    MatchingError,
    brute_force_matching,
    build_defect_graph,
    match_defects,
    matching_weight,
    mwpm_decode,
)


def _few_defects(lat, rng, max_defects=8):
    while True:
        e = sample_errors(lat, rng.uniform(0.01, 0.15), rng)
        s = extract_syndrome(lat, e)
        if (s < 0).sum() <= max_defects:
            return s


def test_empty():
    lat = build_lattice(4)
    g = build_defect_graph(lat, np.ones(lat.n_vertices, dtype=np.int8))
    e, scans = mwpm_decode(g)
    assert not e.any() and scans == 0
    assert matching_weight(g) == 0


def test_single_defect_goes_to_boundary():
    lat = build_lattice(5)
    # vertex next to the top rough edge
    q = lat.boundary_qubits()[2]
    s = extract_syndrome(lat, lat.pattern([q]))
    g = build_defect_graph(lat, s)
    assert g.n_defects == 1 and g.boundary_weights[0] == 1
    e, _ = mwpm_decode(g)
    assert np.array_equal(extract_syndrome(lat, e), s) and e.sum() == 1


def test_close_pair_matched_together():
    lat = build_lattice(9)
    chain = [81 + 4 * 8 + 2, 81 + 4 * 8 + 3]
    s = extract_syndrome(lat, lat.pattern(chain))
    g = build_defect_graph(lat, s)
    pairs, total, _ = match_defects(g)
    assert pairs == [(0, 1)] and total == 2


@pytest.mark.parametrize("d", [4, 6])
def test_matches_brute_force(d):
    lat = build_lattice(d)
    rng = np.random.default_rng(100 + d)
    for _ in range(100):
        s = _few_defects(lat, rng)
        g = build_defect_graph(lat, s)
        assert matching_weight(g) == brute_force_matching(g)
        e, _ = mwpm_decode(g)
        assert np.array_equal(extract_syndrome(lat, e), s)


def test_brute_force_limit():
    lat = build_lattice(8)
    s = -np.ones(lat.n_vertices, dtype=np.int8)
    with pytest.raises(MatchingError):
        brute_force_matching(build_defect_graph(lat, s), limit=10)


def test_path_lengths_match_weights():
    lat = build_lattice(7)
    s = extract_syndrome(lat, sample_errors(lat, 0.1, np.random.default_rng(4)))
    g = build_defect_graph(lat, s)
    for a in range(g.n_defects):
        assert len(g.pair_path(a, None)) == g.boundary_weights[a]
        for b in range(a + 1, g.n_defects):
            path = g.pair_path(b, a)
            assert len(path) == g.weights[a, b]
            r = extract_syndrome(lat, lat.pattern(path))
            assert sorted(np.flatnonzero(r < 0)) == sorted([g.defects[a], g.defects[b]])


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 14), st.integers(0, 2**31), st.booleans(), st.integers(1, 30))
def test_blossom_against_networkx(n, seed, maxcard, wmax):
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                edges.append((i, j, int(rng.integers(1, wmax + 1))))
    mate = max_weight_matching(edges, max_cardinality=maxcard)
    G = nx.Graph()
    G.add_weighted_edges_from(edges)
    ref = nx.max_weight_matching(G, maxcardinality=maxcard)
    wt = {(min(i, j), max(i, j)): w for i, j, w in edges}
    ours = sum(wt[(i, m)] for i, m in enumerate(mate) if m > i)
    theirs = sum(wt[(min(i, j), max(i, j))] for i, j in ref)
    assert ours == theirs
    if maxcard:
        assert sum(m >= 0 for m in mate) == 2 * len(ref)
    for i, m in enumerate(mate):
        if m >= 0:
            assert mate[m] == i


def test_match_stats_count_scans():
    stats = MatchStats()
    max_weight_matching([(0, 1, 3), (1, 2, 4), (2, 3, 3)], stats=stats)
    assert stats.edge_scans > 0 and stats.stages >= 1


def test_adjacent_defects_weight_one():
    lat = build_lattice(5)
    q = next(q for q, inc in enumerate(lat.qubit_incidence) if len(inc) == 2)
    g = build_defect_graph(lat, extract_syndrome(lat, lat.pattern([q])))
    assert g.weights[0, 1] == 1


def test_distance_three_pair_beats_boundaries():
    lat = build_lattice(11)
    row = 5
    start = 121 + row * 10 + 3
    chain = [start, start + 1, start + 2]
    s = extract_syndrome(lat, lat.pattern(chain))
    g = build_defect_graph(lat, s)
    assert g.weights[0, 1] == 3 and g.boundary_weights.min() > 2
    e, _ = mwpm_decode(g)
    assert e.sum() == 3 and brute_force_matching(g) == 3


def test_brute_force_hand_graph():
    from surfqubo.mwpm import DefectGraph

    g = DefectGraph(0, (0, 1), np.array([[0, 3], [3, 0]]), np.array([2, 2]), {})
    assert brute_force_matching(g) == 3
    assert matching_weight(g) == 3
    g0 = DefectGraph(0, (), np.zeros((0, 0), dtype=np.int64), np.zeros(0, dtype=np.int64), {})
    assert brute_force_matching(g0) == 0


def test_edge_scans_grow_faster_at_high_error_rate():
    from surfqubo.bench.fit import fit_loglog_exponent

    rng = np.random.default_rng(20)
    exps = {}
    for p in (0.001, 0.2):
        pts = []
        for d in range(4, 17, 2):
            lat = build_lattice(d)
            scans = [mwpm_decode(build_defect_graph(lat, extract_syndrome(lat, sample_errors(lat, p, rng))))[1]
                     for _ in range(100)]
            pts.append((lat.n_data, float(np.mean(scans))))
        exps[p] = fit_loglog_exponent(pts)[0]
    assert exps[0.2] > exps[0.001]
    assert 2.0 < exps[0.2] < 4.0
