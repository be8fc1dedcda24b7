"""Exact and greedy solvers for network design problems on weighted trees."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .errors import InfeasibleInstanceError, InvalidParameterError, TooManyGroupsError
from .graph import norm_edge
from .kernels import INF
from .partial_tree import RootedTree


@dataclass(frozen=True)
class TreeSolution:
    edges: frozenset
    cost: int


class _View:
    """A tree re-rooted at ``root``: preorder, parents, parent-edge weights, children."""

    def __init__(self, tree: RootedTree, root):
        if root not in tree:
            raise InfeasibleInstanceError(f"root {root} is not a tree vertex")
        adj: dict = {v: [] for v in tree.nodes}
        for c, p, w in tree.edges():
            adj[c].append((p, w))
            adj[p].append((c, w))
        self.root = root
        self.parent = {root: None}
        self.pw = {root: 0}
        self.children: dict = {v: [] for v in adj}
        self.order = [root]
        for x in self.order:
            for y, w in sorted(adj[x]):
                if y not in self.parent:
                    self.parent[y] = x
                    self.pw[y] = w
                    self.children[x].append(y)
                    self.order.append(y)

    def edge(self, c):
        return norm_edge(c, self.parent[c])

    def path_to_root(self, v) -> list:
        out = []
        while self.parent[v] is not None:
            out.append(v)
            v = self.parent[v]
        return out


@dataclass(frozen=True)
class GroupInstance:
    """Rooted group Steiner instance on a tree; groups are restricted to tree vertices."""

    tree: RootedTree
    root: int
    groups: tuple

    def __post_init__(self):
        gs = tuple(frozenset(g) for g in self.groups)
        seen: set = set()
        for g in gs:
            if seen & g:
                raise InvalidParameterError("groups must be pairwise disjoint")
            seen |= g
        object.__setattr__(self, "groups", gs)

    def restricted(self) -> tuple:
        return tuple(frozenset(v for v in g if v in self.tree) for g in self.groups)

    @property
    def infeasible_groups(self) -> list[int]:
        return [i for i, g in enumerate(self.restricted()) if not g]

    @property
    def depth(self) -> int:
        return max((len(_View(self.tree, self.root).path_to_root(v)) for v in self.tree.nodes), default=0)


def group_steiner_on_tree_exact(inst: GroupInstance, cap: int = 12) -> TreeSolution:
    """Minimum-weight subtree holding the root and a vertex of every group.

    ``dp[v][S]`` is the cheapest subtree hanging from ``v`` that covers at least
    the groups in ``S``; children are folded in with a subset min-plus merge.
    """
    k = len(inst.groups)
    if k > cap:
        raise TooManyGroupsError(f"{k} groups exceed the exact-DP cap {cap}; plug in an approximate solver")
    groups = inst.restricted()
    bad = inst.infeasible_groups
    if bad:
        raise InfeasibleInstanceError(f"groups {bad} have no vertex in the tree")
    view = _View(inst.tree, inst.root)
    size = 1 << k
    full = size - 1
    masks = np.arange(size)
    own = {v: 0 for v in view.order}
    for i, g in enumerate(groups):
        for v in g:
            own[v] |= 1 << i
    dp = {}
    choice = {}
    for v in reversed(view.order):
        cur = np.where((masks & ~own[v]) == 0, 0, INF).astype(np.int64)
        for c in view.children[v]:
            ch = np.minimum(dp[c] + view.pw[c], INF)
            ch[0] = 0
            cur, ch_choice = kernels.subset_merge(cur, ch)
            choice[(v, c)] = ch_choice
        dp[v] = cur
    if dp[inst.root][full] >= INF:
        raise InfeasibleInstanceError("no subtree covers every group")
    edges = set()
    todo = [(inst.root, full)]
    while todo:
        v, S = todo.pop()
        for c in reversed(view.children[v]):
            A = int(choice[(v, c)][S])
            rest = S & ~A
            if rest:
                edges.add(view.edge(c))
                todo.append((c, rest))
            S = A
    return TreeSolution(frozenset(edges), int(dp[inst.root][full]))


def k_steiner_on_tree(tree: RootedTree, root, terminals, k: int) -> TreeSolution:
    """Minimum-weight subtree holding the root and at least ``k`` terminals.

    ``dp[v][j]`` is the cheapest subtree hanging from ``v`` with at least ``j``
    terminals; children are merged knapsack style.
    """
    terms = frozenset(t for t in terminals if t in tree)
    if k < 1 or k > len(terms):
        raise InfeasibleInstanceError(f"k={k} but only {len(terms)} terminals lie in the tree")
    view = _View(tree, root)
    dp = {}
    steps = {}
    for v in reversed(view.order):
        cur = [0] + [INF] * k
        if v in terms:
            cur[1] = 0
        for c in view.children[v]:
            ch = [0] + [min(dp[c][b] + view.pw[c], INF) for b in range(1, k + 1)]
            steps[(v, c)] = (cur, ch)
            new = [INF] * (k + 1)
            for a in range(k + 1):
                for b in range(k + 1):
                    j = min(a + b, k)
                    new[j] = min(new[j], cur[a] + ch[b])
            for j in range(k - 1, -1, -1):
                new[j] = min(new[j], new[j + 1])
            cur = [min(x, INF) for x in new]
        dp[v] = cur
    if dp[root][k] >= INF:
        raise InfeasibleInstanceError("not enough reachable terminals")
    edges = set()
    todo = [(root, k)]
    while todo:
        v, j = todo.pop()
        target = dp[v][j]
        for c in reversed(view.children[v]):
            cur, ch = steps[(v, c)]
            a, b = next(
                (a, b)
                for b in range(k + 1)
                for a in range(k + 1)
                if min(a + b, k) >= j and cur[a] + ch[b] == target
            )
            if b:
                edges.add(view.edge(c))
                todo.append((c, b))
            j, target = a, cur[a]
    return TreeSolution(frozenset(edges), int(dp[root][k]))


def tree_path_edges(view: _View, u, v) -> list:
    pu, pv = view.path_to_root(u), view.path_to_root(v)
    su, sv = set(pu), set(pv)
    return [view.edge(x) for x in pu if x not in sv] + [view.edge(x) for x in pv if x not in su]


def steiner_forest_on_tree(tree: RootedTree, pairs) -> TreeSolution:
    """Union of the tree paths of all pairs (optimal on a tree)."""
    view = None
    edges: set = set()
    for s, t in pairs:
        if s not in tree or t not in tree:
            raise InfeasibleInstanceError(f"pair ({s},{t}) has an endpoint outside the tree")
        view = view or _View(tree, tree.root)
        edges.update(tree_path_edges(view, s, t))
    return TreeSolution(frozenset(edges), sum(tree.edge_weight(a, b) for a, b in edges))


@dataclass(frozen=True)
class LoadCostFunction:
    """``f(load)`` with ``f(0) = 0``, monotone and subadditive."""

    func: Callable[[int], float]
    name: str = "custom"

    def __call__(self, load: int) -> float:
        return self.func(load)

    def spot_check(self, rng=None, samples: int = 64, top: int = 64) -> None:
        rng = rng or np.random.default_rng(0)
        if self.func(0) != 0:
            raise InvalidParameterError(f"{self.name}: f(0) must be 0")
        prev = 0
        for x in range(1, top + 1):
            fx = self.func(x)
            if fx < prev:
                raise InvalidParameterError(f"{self.name}: not monotone at {x}")
            prev = fx
        for a, b in rng.integers(0, top, size=(samples, 2)).tolist():
            if self.func(a + b) > self.func(a) + self.func(b) + 1e-9:
                raise InvalidParameterError(f"{self.name}: not subadditive at ({a},{b})")

    @classmethod
    def named(cls, name: str) -> "LoadCostFunction":
        table = {
            "linear": lambda x: x,
            "steiner": lambda x: min(x, 1),
            "sqrt": lambda x: math.ceil(math.sqrt(x)),
            "log": lambda x: math.ceil(math.log2(x + 1)),
        }
        if name not in table:
            raise InvalidParameterError(f"unknown cost function {name!r}; choose from {sorted(table)}")
        return cls(table[name], name)


def network_design_on_tree(tree: RootedTree, pairs, f: LoadCostFunction):
    """Cost and per-edge loads when every pair routes along its tree path."""
    view = _View(tree, tree.root) if tree.root is not None else None
    loads: dict = {}
    for s, t in pairs:
        if s not in tree or t not in tree:
            raise InfeasibleInstanceError(f"pair ({s},{t}) has an endpoint outside the tree")
        for e in tree_path_edges(view, s, t):
            loads[e] = loads.get(e, 0) + 1
    cost = sum(tree.edge_weight(a, b) * f(l) for (a, b), l in loads.items())
    return cost, loads


@dataclass
class OnlineGroupTreeSolver:
    """Greedy online group Steiner tree: buy the cheapest path from the solution to the new group."""

    tree: RootedTree
    root: int
    edges: set = field(default_factory=set)

    def __post_init__(self):
        self._view = _View(self.tree, self.root)
        self._touched = {self.root}

    def accept_group(self, group) -> frozenset:
        grp = sorted(v for v in group if v in self.tree)
        if not grp:
            raise InfeasibleInstanceError("revealed group has no vertex in the tree")
        if any(v in self._touched for v in grp):
            return frozenset()
        best = None
        for v in grp:
            new, cost, x = [], 0, v
            while x not in self._touched:
                new.append(self._view.edge(x))
                cost += self._view.pw[x]
                x = self._view.parent[x]
            if best is None or cost < best[0]:
                best = (cost, new)
        added = frozenset(best[1])
        self.edges |= added
        self._touched |= {x for e in added for x in e}
        return added


@dataclass
class OnlinePairTreeSolver:
    """Greedy online group Steiner forest: connect the pair's sides along the cheapest tree path,
    counting already bought edges as free."""

    tree: RootedTree
    edges: set = field(default_factory=set)

    def __post_init__(self):
        self._adj: dict = {v: [] for v in self.tree.nodes}
        for c, p, w in self.tree.edges():
            self._adj[c].append((p, w))
            self._adj[p].append((c, w))

    def accept_pair(self, S, T) -> frozenset:
        S = sorted(v for v in S if v in self.tree)
        T = set(v for v in T if v in self.tree)
        if not S or not T:
            raise InfeasibleInstanceError("revealed pair has a side outside the tree")
        best = None
        for s in S:
            cost = {s: 0}
            prev = {s: None}
            order = [s]
            for x in order:
                for y, w in sorted(self._adj[x]):
                    if y not in cost:
                        cost[y] = cost[x] + (0 if norm_edge(x, y) in self.edges else w)
                        prev[y] = x
                        order.append(y)
            for t in sorted(T):
                if best is None or cost[t] < best[0]:
                    best = (cost[t], s, t, prev)
        _, s, t, prev = best
        added = set()
        x = t
        while prev[x] is not None:
            e = norm_edge(x, prev[x])
            if e not in self.edges:
                added.add(e)
            x = prev[x]
        self.edges |= added
        return frozenset(added)


def group_steiner_forest_on_tree(tree: RootedTree, pairs) -> TreeSolution:
    """Feed the pairs in order to :class:`OnlinePairTreeSolver`; bought edges stay free."""
    solver = OnlinePairTreeSolver(tree)
    for S, T in pairs:
        solver.accept_pair(S, T)
    edges = frozenset(solver.edges)
    return TreeSolution(edges, sum(tree.edge_weight(a, b) for a, b in edges))
