import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_graph
from hopcore.errors import InvalidParameterError, InvalidWeightError, ParseError
from hopcore.graph import (
    HopPath,
    Subgraph,
    WeightedGraph,
    complete_closure,
    format_graph,
    hop_distance,
    hop_distances,
    hop_shortest_path,
    parse_graph,
    shortest_distances,
    trivial_metric_approx,
    unit_path_fixture,
)
from hopcore.kernels import INF
from hopcore.oracle import brute_hop_distance


def test_from_edges_completes_with_n2L():
    g = WeightedGraph.from_edges(4, [(0, 1, 2), (1, 2, 3)], aspect_ratio=3)
    assert g.is_complete
    assert g.weight(0, 3) == 4 * 4 * 3
    assert g.aspect_ratio == 48
    h = WeightedGraph.from_edges(4, [(0, 1, 2), (1, 2, 3)], complete=False)
    assert not h.is_complete and not h.has_edge(0, 3)
    assert complete_closure(g) is g


@pytest.mark.parametrize("edges", [[(0, 1, 0)], [(0, 1, 1.5)], [(1, 1, 2)], [(0, 1, -3)]])
def test_bad_weights_rejected(edges):
    with pytest.raises(InvalidWeightError):
        WeightedGraph.from_edges(3, edges)


def test_matrix_validation():
    w = np.array([[0, 1], [2, 0]], dtype=np.int64)
    with pytest.raises(InvalidWeightError):
        WeightedGraph(w, 2)
    with pytest.raises(InvalidWeightError):
        WeightedGraph(np.array([[0, 1], [1, 0]], dtype=np.int32), 1)
    with pytest.raises(InvalidWeightError):
        WeightedGraph.from_edges(3, [(0, 1, 5)], aspect_ratio=4)
    with pytest.raises(InvalidParameterError):
        WeightedGraph.from_edges(3, [(0, 7, 1)])


def test_overflow_guard():
    with pytest.raises(InvalidWeightError):
        WeightedGraph.from_edges(2, [(0, 1, 1 << 60)], complete=False)


def test_hop_distance_respects_hops():
    g = WeightedGraph.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 10)], complete=False)
    assert hop_distance(g, 0, 3, 1) == 10
    assert hop_distance(g, 0, 3, 2) == 10
    assert hop_distance(g, 0, 3, 3) == 3
    assert hop_distance(g, 0, 3, 100) == 3
    p = hop_shortest_path(g, 0, 3, 3)
    assert p.vertices == (0, 1, 2, 3) and p.length == 3 and p.hops == 3
    assert hop_shortest_path(g, 0, 3, 2).vertices == (0, 3)


def test_unreachable_is_inf():
    g = WeightedGraph.from_edges(3, [(0, 1, 1)], complete=False)
    assert hop_distance(g, 0, 2, 2) == math.inf
    assert hop_shortest_path(g, 0, 2, 2) is None
    assert hop_distances(g, 2)[0, 2] == INF


def test_hop_bound_validation():
    g = WeightedGraph.from_edges(3, [(0, 1, 1)])
    for bad in (0, -1, 1.5):
        with pytest.raises(InvalidParameterError):
            hop_distance(g, 0, 1, bad)


@pytest.mark.parametrize("seed", range(10))
def test_matches_walk_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    g = random_graph(rng, n, p=0.3, complete=bool(seed % 2))
    for h in (1, 2, 3, 4):
        D = hop_distances(g, h)
        for u in range(n):
            for v in range(n):
                ref = brute_hop_distance(g, u, v, h)
                assert hop_distance(g, u, v, h) == ref
                assert (D[u, v] >= INF) == (ref == math.inf)
                if ref != math.inf:
                    assert D[u, v] == ref
                    p = hop_shortest_path(g, u, v, h)
                    assert p.hops <= h and p.length == ref
                    assert HopPath.from_vertices(g, p.vertices).length == ref


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=3, max_value=12), st.integers(0, 10**6), st.integers(1, 4))
def test_relaxed_triangle(n, seed, h):
    g = random_graph(np.random.default_rng(seed), n, p=0.3)
    d1 = hop_distances(g, h).astype(object)
    d2 = hop_distances(g, 2 * h)
    lhs = d2[:, None, :]
    rhs = d1[:, :, None] + d1[None, :, :]
    assert np.all(lhs <= rhs.astype(np.int64))


def test_monotone_in_h(rng):
    g = random_graph(rng, 10, p=0.2)
    prev = hop_distances(g, 1)
    for h in range(2, 11):
        cur = hop_distances(g, h)
        assert np.all(cur <= prev)
        prev = cur
    np.testing.assert_array_equal(prev, shortest_distances(g))


def test_subgraph_and_paths():
    g = WeightedGraph.from_edges(3, [(0, 1, 2), (1, 2, 3)], complete=False)
    s = Subgraph(g, {(1, 0), (2, 1)})
    assert s.weight == 5 and s.vertices == {0, 1, 2}
    with pytest.raises(InvalidParameterError):
        Subgraph(g, {(0, 2)})
    a = HopPath.from_vertices(g, [0, 1])
    b = HopPath.from_vertices(g, [1, 2])
    assert a.concat(b).length == 5
    assert a.concat(b).reversed().vertices == (2, 1, 0)
    with pytest.raises(InvalidParameterError):
        b.concat(a.reversed().reversed())


def test_parse_roundtrip():
    text = "c demo\np 4 3 5\ne 0 1 2\ne 1 2 5\ne 2 3 1\n"
    g = parse_graph(text, complete=False)
    assert sorted(g.edges()) == [(0, 1, 2), (1, 2, 5), (2, 3, 1)]
    assert parse_graph(format_graph(g), complete=False).weights.tolist() == g.weights.tolist()


@pytest.mark.parametrize("text", ["", "e 0 1 1\n", "p 3 2 4\ne 0 1 1\n", "p 3 1 4\nx 0 1\n",
                                  "p 3 1 4\ne 0 1\n", "p 0 0 1\n", "p 3 1 4\ne 0 a 1\n"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_graph(text)


def test_trivial_approx_sandwich():
    h, beta = 2, 1
    k = beta * h + 1
    L = 12
    g = unit_path_fixture(k, L)
    ok = trivial_metric_approx(g, h, alpha=4, beta=beta)
    assert ok.flag and ok.violation is None
    bad = trivial_metric_approx(g, h, alpha=3, beta=beta)
    assert not bad.flag
    assert bad.violation is not None and bad.violation[:2] == (0, k)
    with pytest.raises(InvalidParameterError):
        trivial_metric_approx(g, h, alpha=0.5, beta=1)
