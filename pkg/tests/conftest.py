import os
import sys
from pathlib import Path

import numpy as np
import pytest

from hopcore.graph import WeightedGraph
from hopcore.partial_tree import RootedTree

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def random_graph(rng, n, p=0.4, wmax=4, complete=True, connected=True):
    """Random weighted graph; a random spanning tree keeps it connected."""
    edges = {}
    if connected:
        for v in range(1, n):
            u = int(rng.integers(0, v))
            edges[(u, v)] = int(rng.integers(1, wmax + 1))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < p:
                edges[(u, v)] = int(rng.integers(1, wmax + 1))
    L = max([wmax] + list(edges.values()))
    return WeightedGraph.from_edges(n, [(u, v, w) for (u, v), w in edges.items()], aspect_ratio=L,
                                    complete=complete)


def tiny_instance(rng, n, extra=4, wmax=4):
    """Sparse connected graph left incomplete, small enough for the brute oracles."""
    edges = {}
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges[(u, v)] = int(rng.integers(1, wmax + 1))
    target = min(n * (n - 1) // 2, n - 1 + extra)
    while len(edges) < target:
        u, v = sorted(rng.choice(n, 2, replace=False).tolist())
        edges.setdefault((u, v), int(rng.integers(1, wmax + 1)))
    return WeightedGraph.from_edges(n, [(u, v, w) for (u, v), w in edges.items()], aspect_ratio=wmax,
                                    complete=False)


def grid_graph(k, w=1):
    edges = []
    for r in range(k):
        for c in range(k):
            v = r * k + c
            if c + 1 < k:
                edges.append((v, v + 1, w))
            if r + 1 < k:
                edges.append((v, v + k, w))
    return WeightedGraph.from_edges(k * k, edges, complete=True)


def path_graph(n, w=1):
    return WeightedGraph.from_edges(n, [(i, i + 1, w) for i in range(n - 1)], complete=True)


def random_tree(rng, n, wmax=6):
    """Rooted tree on 0..n-1 with root 0, as (RootedTree, [(a, b, w)])."""
    parent, weight, triples = {}, {}, []
    for v in range(1, n):
        p = int(rng.integers(0, v))
        w = int(rng.integers(1, wmax + 1))
        parent[v], weight[v] = p, w
        triples.append((p, v, w))
    return RootedTree(0, parent, weight), triples


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def samples_dir():
    return SAMPLES


@pytest.fixture
def clean_env(monkeypatch):
    for var in ("HOPCORE_SEED", "HOPCORE_DISABLE_NUMBA"):
        monkeypatch.delenv(var, raising=False)
    return os.environ


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
