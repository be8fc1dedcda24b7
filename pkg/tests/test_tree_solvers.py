import numpy as np
import pytest

from conftest import random_tree
from hopcore.errors import InfeasibleInstanceError, InvalidParameterError, TooManyGroupsError
from hopcore.oracle import brute_tree_group_steiner, brute_tree_k_steiner, brute_tree_steiner_forest
from hopcore.partial_tree import RootedTree
from hopcore.tree_solvers import (
    GroupInstance,
    LoadCostFunction,
    OnlineGroupTreeSolver,
    OnlinePairTreeSolver,
    group_steiner_forest_on_tree,
    group_steiner_on_tree_exact,
    k_steiner_on_tree,
    network_design_on_tree,
    steiner_forest_on_tree,
)


def _connected(edges, a, b):
    adj = {}
    for x, y in edges:
        adj.setdefault(x, []).append(y)
        adj.setdefault(y, []).append(x)
    seen, todo = {a}, [a]
    while todo:
        x = todo.pop()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return b in seen


def _disjoint_groups(rng, n, k):
    verts = rng.permutation(n).tolist()
    out = []
    for _ in range(k):
        size = int(rng.integers(1, 3))
        grp, verts = verts[:size], verts[size:]
        if grp:
            out.append(frozenset(grp))
    return out


@pytest.mark.parametrize("seed", range(40))
def test_group_steiner_matches_brute(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 11))
    tree, triples = random_tree(rng, n)
    root = int(rng.integers(0, n))
    groups = _disjoint_groups(rng, n, int(rng.integers(1, 4)))
    sol = group_steiner_on_tree_exact(GroupInstance(tree, root, groups))
    ref = brute_tree_group_steiner(triples, root, groups)
    assert sol.cost == ref[0]
    for grp in groups:
        assert any(v == root or _connected(sol.edges, root, v) for v in grp)


@pytest.mark.parametrize("seed", range(40))
def test_k_steiner_matches_brute(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(2, 11))
    tree, triples = random_tree(rng, n)
    root = int(rng.integers(0, n))
    terms = set(rng.choice(n, int(rng.integers(1, n + 1)), replace=False).tolist())
    k = int(rng.integers(1, len(terms) + 1))
    sol = k_steiner_on_tree(tree, root, terms, k)
    ref = brute_tree_k_steiner(triples, root, terms, k)
    assert sol.cost == ref[0]
    reached = sum(1 for t in terms if t == root or _connected(sol.edges, root, t))
    assert reached >= k


@pytest.mark.parametrize("seed", range(40))
def test_steiner_forest_matches_brute(seed):
    rng = np.random.default_rng(2000 + seed)
    n = int(rng.integers(2, 11))
    tree, triples = random_tree(rng, n)
    pairs = [tuple(rng.choice(n, 2, replace=False).tolist()) for _ in range(int(rng.integers(1, 4)))]
    sol = steiner_forest_on_tree(tree, pairs)
    assert sol.cost == brute_tree_steiner_forest(triples, pairs)[0]


def test_group_validation_and_cap(rng):
    tree, _ = random_tree(rng, 6)
    with pytest.raises(InvalidParameterError):
        GroupInstance(tree, 0, [{1, 2}, {2, 3}])
    inst = GroupInstance(tree, 0, [{1}, {99}])
    assert inst.infeasible_groups == [1]
    with pytest.raises(InfeasibleInstanceError):
        group_steiner_on_tree_exact(inst)
    with pytest.raises(TooManyGroupsError):
        group_steiner_on_tree_exact(GroupInstance(tree, 0, [{v} for v in range(1, 6)]), cap=3)


def test_k_steiner_infeasible(rng):
    tree, _ = random_tree(rng, 5)
    with pytest.raises(InfeasibleInstanceError):
        k_steiner_on_tree(tree, 0, {1, 2}, 3)
    assert k_steiner_on_tree(tree, 0, {0, 3}, 1).cost == 0


def test_cost_functions():
    for name in ("linear", "steiner", "sqrt", "log"):
        f = LoadCostFunction.named(name)
        f.spot_check()
        assert f(0) == 0
    with pytest.raises(InvalidParameterError):
        LoadCostFunction(lambda x: x * x, "square").spot_check()
    with pytest.raises(InvalidParameterError):
        LoadCostFunction(lambda x: x + 1, "shifted").spot_check()
    with pytest.raises(InvalidParameterError):
        LoadCostFunction.named("cubic")


def test_network_design_loads():
    t = RootedTree(0, {1: 0, 2: 0, 3: 1}, {1: 2, 2: 3, 3: 5})
    cost, loads = network_design_on_tree(t, [(3, 2), (1, 2), (3, 0)], LoadCostFunction.named("sqrt"))
    assert loads == {(0, 1): 3, (0, 2): 2, (1, 3): 2}
    assert cost == 2 * 2 + 3 * 2 + 5 * 2
    lin, _ = network_design_on_tree(t, [(3, 2)], LoadCostFunction.named("linear"))
    assert lin == 10


def test_online_group_solver_is_incremental():
    t = RootedTree(0, {1: 0, 2: 1, 3: 0, 4: 3}, {1: 1, 2: 1, 3: 5, 4: 1})
    s = OnlineGroupTreeSolver(t, 0)
    assert s.accept_group({2, 4}) == {(0, 1), (1, 2)}
    assert s.accept_group({1}) == frozenset()
    assert s.accept_group({4}) == {(0, 3), (3, 4)}
    with pytest.raises(InfeasibleInstanceError):
        s.accept_group({42})


def test_online_pair_solver_reuses_edges():
    t = RootedTree(0, {1: 0, 2: 0, 3: 2}, {1: 4, 2: 1, 3: 1})
    s = OnlinePairTreeSolver(t)
    assert s.accept_pair({3}, {0}) == {(0, 2), (2, 3)}
    assert s.accept_pair({2}, {3, 1}) == frozenset()
    sol = group_steiner_forest_on_tree(t, [({1}, {3}), ({2}, {0})])
    assert sol.cost == 6
