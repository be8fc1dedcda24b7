import numpy as np
import pytest

from conftest import random_graph
from hopcore.errors import InvalidInputError, InvalidParameterError
from hopcore.repetition import (
    EdgeSet,
    build_repetition_tree,
    default_repetitions,
    map_graph_to_tree,
    map_tree_to_graph,
)
from hopcore.rng import stream


@pytest.fixture(scope="module")
def rep():
    g = random_graph(np.random.default_rng(21), 10, p=0.3)
    return build_repetition_tree(g, 1, 0, q=4, rng=stream(4, "rep"))


def test_phi_shape(rep):
    assert rep.phi[0] == (0,)
    assert rep.q == 4
    for v, copies in rep.phi.items():
        assert len(copies) <= rep.q
        assert all(rep.original(c) == v for c in copies)
    assert rep.tree.root == 0
    assert len(rep.tree) == 1 + sum(len(c) for v, c in rep.phi.items() if v != 0)


def test_copy_ids(rep):
    n = rep.graph.n
    assert rep.copy_id(2, 0) == 0
    assert rep.copy_id(2, 5) == 2 * n + 5
    assert rep.lift([0, 5]) == {0, *rep.phi.get(5, ())}


def test_edge_maps_monotone_and_dominated(rep):
    rng = np.random.default_rng(0)
    gedges = [(u, v) for u, v, _ in rep.graph.edges()]
    tedges = [rep.tree.edge_key(c) for c in rep.tree.parent]
    for _ in range(20):
        small = {gedges[i] for i in rng.choice(len(gedges), 4, replace=False)}
        big = small | {gedges[i] for i in rng.choice(len(gedges), 6, replace=False)}
        assert map_graph_to_tree(rep, small) <= map_graph_to_tree(rep, big)
        ts = {tedges[i] for i in rng.choice(len(tedges), min(3, len(tedges)), replace=False)}
        tb = ts | {tedges[i] for i in rng.choice(len(tedges), min(5, len(tedges)), replace=False)}
        assert map_tree_to_graph(rep, ts) <= map_tree_to_graph(rep, tb)
        assert rep.graph_weight(map_tree_to_graph(rep, tb)) <= rep.tree_weight(tb)


def test_errors(rep):
    with pytest.raises(InvalidInputError):
        map_tree_to_graph(rep, {(1, 999)})
    with pytest.raises(InvalidParameterError):
        map_graph_to_tree(rep, {(0, 99)})
    with pytest.raises(InvalidParameterError):
        EdgeSet(frozenset(), "air")
    assert not EdgeSet(frozenset({(0, 1)}), "graph") <= EdgeSet(frozenset({(0, 1)}), "tree")
    with pytest.raises(InvalidParameterError):
        build_repetition_tree(rep.graph, 1, 0, q=0, rng=stream(0))


def test_default_repetitions():
    assert default_repetitions(1) == 1
    assert default_repetitions(16) == 16
    assert default_repetitions(17) == 20


def test_to_json_lists_phi(rep):
    out = rep.to_json()
    assert out["phi"]["0"] == [0]
    assert out["q"] == 4 and len(out["edges"]) == len(rep.tree) - 1
