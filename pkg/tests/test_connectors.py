import itertools

import numpy as np
import pytest

from conftest import grid_graph, random_graph
from hopcore.connectors import (
    adjacency,
    build_hop_connector,
    euler_tour_connector,
    extract_connector_forest,
    h_hop_pairs,
    hop_components,
    project_subgraph,
    projection_certificate,
)
from hopcore.errors import InvalidInputError, PreconditionViolation
from hopcore.graph import Subgraph, WeightedGraph
from hopcore.oracle import OracleBudget, brute_hop_connectivity_graph
from hopcore.partial_tree import sample_embedding
from hopcore.rng import stream


def check_connector(edges, W, h):
    """Assert the connector contract against the oracle; returns the connector."""
    conn = build_hop_connector(edges, W, h)
    E = {tuple(sorted(e)) for e in edges}
    for p in conn.paths:
        assert p[0] in W and p[-1] in W and p[0] != p[-1]
        for a, b in zip(p, p[1:]):
            assert tuple(sorted((a, b))) in E
    assert conn.congestion_max <= 4
    assert conn.hop_max <= 8 * h
    brute = brute_hop_connectivity_graph(edges, W, h, OracleBudget(max_vertices=64))
    assert sorted(map(sorted, conn.components())) == sorted(sorted(m) for m, _ in brute)
    cover = {w: c for m, c in brute for w in m}
    for p in conn.paths:
        assert set(p) <= cover[p[0]]
    return conn


def test_path_graph_connector():
    edges = [(i, i + 1) for i in range(9)]
    conn = check_connector(edges, {0, 3, 6, 9}, 3)
    assert len(conn.components()) == 1
    conn = check_connector(edges, {0, 3, 9}, 3)
    assert sorted(map(sorted, conn.components())) == [[0, 3], [9]]


def test_marked_vertices_block_paths():
    # 0 reaches 2 only through marked 1
    edges = [(0, 1), (1, 2)]
    assert sorted(map(sorted, hop_components(edges, {0, 1, 2}, 1))) == [[0, 1, 2]]
    assert sorted(map(sorted, hop_components(edges, {0, 2}, 1))) == [[0], [2]]
    assert sorted(map(sorted, hop_components(edges, {0, 2}, 2))) == [[0, 2]]


@pytest.mark.parametrize("seed", range(25))
def test_random_small_graphs(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 9))
    g = random_graph(rng, n, p=0.25, complete=False)
    edges = [(u, v) for u, v, _ in g.edges()]
    for h in (1, 2, 3):
        k = int(rng.integers(1, n + 1))
        W = set(rng.choice(n, k, replace=False).tolist())
        check_connector(edges, W, h)


def test_long_path_hits_band_cuts():
    edges = [(i, i + 1) for i in range(40)]
    W = set(range(0, 41, 2))
    conn = check_connector(edges, W, 2)
    assert conn.hop_max <= 16


def test_forest_is_forest():
    g = grid_graph(4)
    W = {0, 5, 10, 15, 3}
    sub = Subgraph(g, [(u, v) for u, v, w in g.edges() if w == 1])
    forest = extract_connector_forest(sub, W, 3)
    adj = adjacency(forest)
    m = sum(len(v) for v in adj.values()) // 2
    comps = hop_components(sub, W, 3)
    # each component contributes one tree
    assert m == len(adj) - len(comps)


def test_euler_tour_connector():
    edges = [(0, 1), (1, 2), (1, 3), (3, 4)]
    conn = euler_tour_connector(edges, {0, 2, 4}, 1, 4)
    assert conn.congestion_max <= 2
    assert len(conn.components()) == 1
    with pytest.raises(PreconditionViolation):
        euler_tour_connector(edges, {0, 4}, 1, 2)
    with pytest.raises(InvalidInputError):
        euler_tour_connector([(0, 1), (1, 2), (2, 0)], {0}, 1, 4)


def test_h_hop_pairs():
    H = [(0, 1), (1, 2), (2, 3)]
    assert h_hop_pairs(H, [0, 2, 3], 2) == [(0, 2), (2, 3)]
    assert h_hop_pairs(H, [0, 3], 3) == [(0, 3)]


def test_projection_bound_and_precondition():
    rng = np.random.default_rng(7)
    g = random_graph(rng, 12, p=0.3)
    h = 1
    emb = sample_embedding(g, 8 * h, 0.1, stream(3, "proj"))
    edges = [(u, v) for u, v, w in g.edges()]
    pick = rng.choice(len(edges), 10, replace=False)
    H = [edges[i] for i in pick]
    proj = project_subgraph(emb, H, h)
    cert = projection_certificate(emb, H, h)
    assert cert["ok"] and cert["contained"]
    assert proj.weight == cert["projection_weight"] <= cert["bound_4"]
    with pytest.raises(PreconditionViolation):
        project_subgraph(emb, H, 2)


def test_exhaustive_four_vertices():
    # every graph on 4 labelled vertices, every W, h in 1..3
    pairs = list(itertools.combinations(range(4), 2))
    for mask in range(1, 1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        for r in range(1, 5):
            for W in itertools.combinations(range(4), r):
                for h in (1, 2, 3):
                    check_connector(edges, set(W), h)
