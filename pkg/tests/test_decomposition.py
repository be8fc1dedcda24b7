import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_graph
from hopcore.decomposition import (
    DecompositionParams,
    PartialVertexPartition,
    check_metric,
    hop_constrained_decomposition,
    mixture_weights,
    padded_decomposition,
)
from hopcore.errors import InvalidMetricError, InvalidParameterError
from hopcore.graph import WeightedGraph, hop_distances
from hopcore.rng import stream


def _cycle_metric(n):
    i = np.arange(n)
    diff = np.abs(i[:, None] - i[None, :])
    return np.minimum(diff, n - diff).astype(np.int64)


def test_mixture_is_exact():
    g = WeightedGraph.from_edges(3, [(0, 1, 3), (1, 2, 5)], complete=False)
    m = mixture_weights(g, Fraction(3, 2), 7)
    assert m.weight(0, 1) == Fraction(2, 3) + Fraction(3, 7)
    assert m.distance(0, 2) == 2 * Fraction(2, 3) + Fraction(8, 7)
    m2 = mixture_weights(g, "2", 0.5)
    assert m2.distance(0, 1) == Fraction(1, 2) + 6
    with pytest.raises(InvalidParameterError):
        mixture_weights(g, 0, 1)


def test_check_metric():
    check_metric(_cycle_metric(6))
    bad = np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    with pytest.raises(InvalidMetricError):
        check_metric(bad)
    with pytest.raises(InvalidMetricError):
        check_metric(np.array([[0, 1], [2, 0]]))


def test_padded_parts_have_bounded_diameter():
    d = _cycle_metric(40)
    rng = stream(3, "pad")
    for delta in (2, 5, 11):
        for _ in range(50):
            parts = padded_decomposition(d, delta, rng)
            assert sorted(x for p in parts for x in p) == list(range(40))
            for p in parts:
                assert d[np.ix_(p, p)].max() <= delta


def test_padding_probability():
    # Pr[B(v, r) split] <= r * rho_pad / delta with rho_pad = 2 ln m
    n, delta, draws = 32, 8, 1500
    d = _cycle_metric(n)
    rng = stream(11, "padding")
    split = {1: 0, 2: 0}
    for _ in range(draws):
        parts = padded_decomposition(d, delta, rng)
        pid = np.empty(n, dtype=int)
        for i, p in enumerate(parts):
            pid[p] = i
        for r in split:
            ball = d[0] <= r
            split[r] += len(set(pid[ball])) > 1
    rho = 2 * math.log(n)
    for r, hits in split.items():
        assert hits / draws <= r * rho / delta + 0.05


def test_partition_validation():
    with pytest.raises(InvalidParameterError):
        PartialVertexPartition((frozenset({1}), frozenset({1, 2})), frozenset())
    with pytest.raises(InvalidParameterError):
        PartialVertexPartition((frozenset({1}),), frozenset({1}))
    with pytest.raises(InvalidParameterError):
        DecompositionParams(gamma=1.5)


def _sparse(seed, n=24, wmax=100):
    rng = np.random.default_rng(seed)
    return random_graph(rng, n, p=0.2, wmax=wmax, complete=False)


@pytest.mark.parametrize("h,b,gamma", [(100, 100, 0.3), (120, 120, 0.25), (60, 60, 0.3)])
def test_hop_constrained_properties(h, b, gamma):
    g = _sparse(4)
    n = g.n
    rng = stream(1, "hcd")
    delta = 2 * DecompositionParams().rho(n)
    low_hops = math.floor(h * gamma / delta)
    dh = hop_distances(g, h)
    dl = hop_distances(g, low_hops) if low_hops >= 1 else None
    excluded = np.zeros(n)
    draws = 300
    for _ in range(draws):
        P = hop_constrained_decomposition(g, h, b, gamma, rng)
        pid = P.part_of()
        assert set(pid) | P.excluded == set(range(n))
        for u in pid:
            for v in pid:
                if u >= v:
                    continue
                if pid[u] == pid[v]:
                    assert dh[u, v] <= b
                elif dl is not None:
                    assert dl[u, v] > b * gamma / delta
        for v in P.excluded:
            excluded[v] += 1
    assert excluded.max() / draws <= gamma + 0.05


def test_hop_constrained_subset_and_edge_cases():
    g = _sparse(2, n=10)
    rng = stream(0, "subset")
    P = hop_constrained_decomposition(g, 50, 50, 0.2, rng, vertices=[1, 3, 5])
    assert set(P.part_of()) | P.excluded == {1, 3, 5}
    assert hop_constrained_decomposition(g, 5, 5, 0.2, rng, vertices=[]).parts == ()
    assert hop_constrained_decomposition(g, 5, 5, 0.2, rng, vertices=[4]).parts == (frozenset({4}),)
    with pytest.raises(InvalidParameterError):
        hop_constrained_decomposition(g, 5, 5, 1.0, rng)
