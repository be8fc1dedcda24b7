"""Bicriteria hop-constrained network design on general graphs.

Every solver follows the same template: sample tree embeddings, solve the
problem on the tree, map the tree solution back through witness walks and then
re-verify the result against the graph with hop-bounded BFS.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .config import DEFAULT_CONSTANTS, Constants
from .demands import DemandSet
from .errors import (
    CoverageFailureError,
    InfeasibleInstanceError,
    InvalidInputError,
    SamplingFailureError,
)
from .graph import HopPath, Subgraph, WeightedGraph, hop_distances, hop_shortest_path, norm_edge
from .kernels import INF
from .partial_tree import sample_embedding, sample_partial_tree_embedding, tree_recipe
from .repetition import build_repetition_tree, map_tree_to_graph
from .tree_solvers import (
    GroupInstance,
    LoadCostFunction,
    OnlineGroupTreeSolver,
    OnlinePairTreeSolver,
    group_steiner_forest_on_tree,
    group_steiner_on_tree_exact,
    k_steiner_on_tree,
)

SF_EPSILON = 0.1
KST_EPSILON = 0.25


# verification -------------------------------------------------------------

def _adj(edges) -> dict:
    adj: dict = {}
    for a, b in sorted(edges):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    return adj


def _hops_from(adj, sources) -> dict:
    dist = {s: 0 for s in sources}
    q = deque(sorted(sources))
    while q:
        x = q.popleft()
        for y in adj.get(x, ()):
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def evaluate(g: WeightedGraph, edges, demand: DemandSet, hop_budget, root=None):
    """Per-demand hop distances inside ``edges`` and whether all fit ``hop_budget``.

    For terminal demands the hops are measured from the root and the check is on
    the hop diameter of the root's component and the number of terminals in it.
    """
    Subgraph(g, edges)  # every edge must exist in g
    adj = _adj(edges)
    if demand.kind == "pairs":
        hops = [_hops_from(adj, [s]).get(t) for s, t in demand.payload]
    elif demand.kind == "groups":
        d = _hops_from(adj, [root])
        hops = [min((d[v] for v in grp if v in d), default=None) for grp in demand.payload]
    elif demand.kind == "group-pairs":
        hops = []
        for S, T in demand.payload:
            d = _hops_from(adj, S)
            hops.append(min((d[v] for v in T if v in d), default=None))
    else:
        terms, k = demand.payload
        d = _hops_from(adj, [root])
        hops = [d.get(t) for t in sorted(terms)]
        diameter = max((max(_hops_from(adj, [x]).values()) for x in d), default=0)
        covered = sum(1 for x in hops if x is not None)
        return hops, covered >= k and diameter <= hop_budget, {"diameter": diameter, "covered": covered}
    ok = all(x is not None and x <= hop_budget for x in hops)
    return hops, ok, {}


@dataclass(frozen=True)
class BicriteriaSolution:
    edges: frozenset
    cost: int
    hop_budget: int
    per_demand_hops: tuple
    feasible: bool
    params: dict = field(default_factory=dict)

    def to_json(self, g: WeightedGraph, seed=None) -> dict:
        return {
            "schema": 1,
            "edges": [[u, v, g.weight(u, v)] for u, v in sorted(self.edges)],
            "cost": self.cost,
            "hop_budget": self.hop_budget,
            "per_demand_hops": list(self.per_demand_hops),
            "feasible": self.feasible,
            "seed": seed,
            "params": self.params,
        }


def make_solution(g, edges, demand, hop_budget, root=None, params=None, cost=None, required=None):
    edges = frozenset(norm_edge(a, b) for a, b in edges)
    hops, ok, extra = evaluate(g, edges, demand, hop_budget, root)
    if required is not None:
        ok = extra["covered"] >= required and extra["diameter"] <= hop_budget
    p = dict(params or {})
    p.update(extra)
    if cost is None:
        cost = sum(g.weight(a, b) for a, b in edges)
    return BicriteriaSolution(edges, int(cost), int(hop_budget), tuple(hops), bool(ok), p)


def bfs_tree(edges, root) -> frozenset:
    """Unit-weight BFS tree of the root's component (ties to the smaller vertex)."""
    adj = _adj(edges)
    seen = {root}
    q = deque([root])
    out = set()
    while q:
        x = q.popleft()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                out.add(norm_edge(x, y))
                q.append(y)
    return frozenset(out)


def _retry(fn, constants: Constants):
    last = None
    for attempt in range(constants.retry_budget):
        try:
            return fn()
        except (CoverageFailureError, SamplingFailureError) as exc:
            last = exc
    raise last


def _check_vertices(g, vs):
    bad = sorted(v for v in vs if not 0 <= v < g.n)
    if bad:
        raise InvalidInputError(f"vertices outside 0..{g.n - 1}: {bad}")


def _budget(beta, hop_bound) -> int:
    return int(math.floor(beta * hop_bound + 1e-9))


# oblivious path tables ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class PathTable:
    """A fixed walk ``P_uv`` for every pair; solutions for any demand set are read off it."""

    graph: WeightedGraph
    paths: dict
    hop_budget: int
    h: int
    params: dict = field(default_factory=dict)

    def path(self, u, v) -> HopPath:
        if u == v:
            return HopPath((u,), 0)
        p = self.paths[norm_edge(u, v)]
        return p if p.vertices[0] == u else p.reversed()

    def induced(self, pairs) -> BicriteriaSolution:
        pairs = [(int(s), int(t)) for s, t in pairs]
        edges = set()
        for s, t in pairs:
            edges |= self.path(s, t).edge_set()
        return make_solution(self.graph, edges, DemandSet.pairs(pairs), self.hop_budget, params=self.params)

    def network_cost(self, pairs, f: LoadCostFunction):
        loads: dict = {}
        for s, t in pairs:
            for e in self.path(s, t).edge_set():
                loads[e] = loads.get(e, 0) + 1
        return sum(self.graph.weight(a, b) * f(l) for (a, b), l in loads.items()), loads

    def induced_network(self, pairs, f: LoadCostFunction) -> BicriteriaSolution:
        pairs = [(int(s), int(t)) for s, t in pairs]
        cost, loads = self.network_cost(pairs, f)
        return make_solution(self.graph, set(loads), DemandSet.pairs(pairs), self.hop_budget,
                             params={**self.params, "cost_fn": f.name}, cost=cost)


def _path_table(g, embs, overwrite: bool):
    table: dict = {}
    for emb in embs:
        nodes = emb.tree.nodes
        for i, u in enumerate(nodes):
            for v in nodes[i + 1 :]:
                if overwrite or (u, v) not in table:
                    table[(u, v)] = emb.graph_path(u, v)
    missing = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if (u, v) not in table]
    if missing:
        raise CoverageFailureError(f"pairs in no sampled tree: {missing[:5]}{'...' if len(missing) > 5 else ''}")
    return table


def solve_oblivious_steiner_forest(g: WeightedGraph, h: int, rng, constants: Constants = DEFAULT_CONSTANTS,
                                   q=None, epsilon: float = SF_EPSILON) -> PathTable:
    """Paths from ``q`` sampled 8h-hop embeddings; each pair uses the first tree holding both ends."""
    from .repetition import default_repetitions

    q = q or default_repetitions(g.n, constants)

    def attempt():
        embs = [sample_embedding(g, 8 * h, epsilon, rng, constants) for _ in range(q)]
        return _path_table(g, embs, overwrite=False)

    table = _retry(attempt, constants) if g.n > 1 else {}
    recipe = tree_recipe(g, 8 * h, epsilon, constants)
    params = {"h": h, "q": q, "epsilon": epsilon, "embedding_hops": 8 * h, "beta": recipe.beta}
    return PathTable(g, table, _budget(recipe.beta, 8 * h), h, params)


def min_cost_spanner(client_edges, server_graph: WeightedGraph, h: int, rng,
                     constants: Constants = DEFAULT_CONSTANTS) -> BicriteriaSolution:
    """Every client edge becomes a demand pair of the oblivious Steiner forest table."""
    pairs = [(int(u), int(v)) for u, v in client_edges]
    _check_vertices(server_graph, {x for p in pairs for x in p})
    if not pairs:
        return BicriteriaSolution(frozenset(), 0, 0, (), True, {"h": h})
    return solve_oblivious_steiner_forest(server_graph, h, rng, constants).induced(pairs)


def solve_oblivious_network_design(g: WeightedGraph, h: int, f: LoadCostFunction, rng,
                                   constants: Constants = DEFAULT_CONSTANTS, q=None,
                                   epsilon: float = SF_EPSILON) -> PathTable:
    """Paths from ``q`` sampled 5h-hop embeddings; later trees overwrite earlier ones."""
    from .repetition import default_repetitions

    f.spot_check()
    q = q or default_repetitions(g.n, constants)

    def attempt():
        embs = [sample_embedding(g, 5 * h, epsilon, rng, constants) for _ in range(q)]
        return _path_table(g, embs, overwrite=True)

    table = _retry(attempt, constants) if g.n > 1 else {}
    recipe = tree_recipe(g, 5 * h, epsilon, constants)
    params = {"h": h, "q": q, "epsilon": epsilon, "embedding_hops": 5 * h, "beta": recipe.beta, "cost_fn": f.name}
    return PathTable(g, table, _budget(recipe.beta, 5 * h), h, params)


# group Steiner tree -------------------------------------------------------

def _check_groups(g, root, groups):
    groups = [frozenset(int(v) for v in grp) for grp in groups]
    _check_vertices(g, {root} | {v for grp in groups for v in grp})
    seen: set = set()
    for grp in groups:
        if not grp:
            raise InvalidInputError("empty group")
        if seen & grp:
            raise InvalidInputError("groups must be pairwise disjoint")
        seen |= grp
    return groups


def _reachable_or_raise(g, root, groups, hops):
    d = hop_distances(g, hops)
    for i, grp in enumerate(groups):
        if root not in grp and min(int(d[root, v]) for v in grp) >= INF:
            raise InfeasibleInstanceError(f"group {i} is unreachable from {root} within {hops} hops")


def _witness_edges(emb, tree_edges) -> set:
    out = set()
    for a, b in tree_edges:
        out |= emb.witness[emb.tree.child_of(a, b)].edge_set()
    return out


def solve_group_steiner_merging(g: WeightedGraph, h: int, root: int, groups, rng,
                                constants: Constants = DEFAULT_CONSTANTS, tree_solver=None,
                                epsilon: float = SF_EPSILON) -> BicriteriaSolution:
    """Group Steiner tree by random super-group merging over repeated embeddings.

    Each phase samples several rooted 8h-hop embeddings, merges the active
    groups at random into fewer super-groups, solves each tree instance and keeps
    the cheapest mapped result.  Groups left once few remain get a direct
    ``h``-hop shortest path.  The output is a BFS tree of the union.
    """
    tree_solver = tree_solver or (lambda inst: group_steiner_on_tree_exact(inst, constants.group_cap))
    groups = _check_groups(g, root, groups)
    recipe = tree_recipe(g, 8 * h, epsilon, constants)
    budget = max(_budget(recipe.beta, 8 * h), h)
    _reachable_or_raise(g, root, groups, budget)
    n = g.n
    lg = max(1.0, math.log2(n))
    k = len(groups)
    phases = max(1, math.ceil(constants.phase_factor * lg * max(1.0, math.log2(k + 1))))
    iterations = max(1, math.ceil(constants.iteration_factor * lg))
    threshold = constants.c_m * lg
    solution: set = set()

    def still_active():
        d = _hops_from(_adj(solution), [root])
        return [i for i, grp in enumerate(groups) if min((d[v] for v in grp if v in d), default=INF) > budget]

    active = still_active()
    used_phases = 0
    for _ in range(phases):
        a = len(active)
        if a <= threshold:
            break
        used_phases += 1
        kp = max(1, min(a, math.ceil(a / threshold), constants.group_cap))
        best = None
        for _ in range(iterations):
            emb = sample_partial_tree_embedding(g, 8 * h, epsilon, root, rng, constants)
            assign = rng.integers(kp, size=a)
            supers = [set() for _ in range(kp)]
            for slot, gi in zip(assign.tolist(), active):
                supers[slot] |= groups[gi]
            supers = [frozenset(v for v in s if v in emb.tree) for s in supers]
            supers = [s for s in supers if s]
            if not supers:
                continue
            if any(root in s for s in supers):
                supers = [s for s in supers if root not in s]
            sol = tree_solver(GroupInstance(emb.tree, root, tuple(supers))) if supers else None
            if sol is None:
                continue
            mapped = _witness_edges(emb, sol.edges)
            w = sum(g.weight(x, y) for x, y in mapped)
            if best is None or w < best[0]:
                best = (w, mapped)
        if best is not None:
            solution |= best[1]
        active = still_active()
    for gi in active:
        d = hop_distances(g, h)
        v = min(groups[gi], key=lambda x: (int(d[root, x]), x))
        path = hop_shortest_path(g, root, v, h)
        if path is None:
            raise InfeasibleInstanceError(f"group {gi} is unreachable within {h} hops")
        solution |= path.edge_set()
    edges = bfs_tree(solution, root)
    params = {"h": h, "phases": used_phases, "iterations": iterations, "root": root,
              "embedding_hops": 8 * h, "beta": recipe.beta}
    return make_solution(g, edges, DemandSet.groups(groups), budget, root=root, params=params)


def solve_group_steiner_reptree(g: WeightedGraph, h: int, root: int, groups, rng,
                                constants: Constants = DEFAULT_CONSTANTS, q=None,
                                tree_solver=None) -> BicriteriaSolution:
    """Group Steiner tree through one repetition tree and one tree instance."""
    tree_solver = tree_solver or (lambda inst: group_steiner_on_tree_exact(inst, constants.group_cap))
    groups = _check_groups(g, root, groups)
    todo = [grp for grp in groups if root not in grp]

    def attempt():
        rep = build_repetition_tree(g, h, root, q, rng, constants)
        lifted = [frozenset(rep.lift(grp)) for grp in todo]
        if any(not x for x in lifted):
            raise CoverageFailureError("a group has no copy in the repetition tree")
        return rep, lifted

    rep, lifted = _retry(attempt, constants)
    budget = _budget(max(c.beta for c in rep.constituents), 8 * h)
    _reachable_or_raise(g, root, groups, budget)
    edges: frozenset = frozenset()
    if lifted:
        sol = tree_solver(GroupInstance(rep.tree, root, tuple(lifted)))
        edges = bfs_tree(map_tree_to_graph(rep, sol.edges).edges, root)
    params = {"h": h, "q": rep.q, "root": root, "embedding_hops": 8 * h}
    return make_solution(g, edges, DemandSet.groups(groups), budget, root=root, params=params)


# k-Steiner tree -----------------------------------------------------------

def solve_k_steiner(g: WeightedGraph, h: int, root: int, terminals, k: int, relaxed: bool, rng,
                    constants: Constants = DEFAULT_CONSTANTS,
                    epsilon: float = KST_EPSILON) -> BicriteriaSolution:
    """Tree through the root spanning at least ``k`` terminals (``ceil(k/8)`` when relaxed).

    The declared hop budget bounds the hop diameter of the output.
    """
    terms = frozenset(int(t) for t in terminals)
    _check_vertices(g, terms | {root})
    if not 1 <= k <= len(terms):
        raise InvalidInputError(f"k={k} needs 1 <= k <= |terminals|={len(terms)}")
    recipe = tree_recipe(g, 8 * h, epsilon, constants)
    budget = 2 * _budget(recipe.beta, 8 * h)
    d = hop_distances(g, budget)
    if sum(1 for t in terms if d[root, t] < INF) < k:
        raise InfeasibleInstanceError("fewer than k terminals reachable from the root")

    def relaxed_once(pool, need):
        emb = sample_partial_tree_embedding(g, 8 * h, epsilon, root, rng, constants)
        inside = [t for t in pool if t in emb.tree]
        target = math.ceil(need / 8)
        if len(inside) < target:
            raise SamplingFailureError(f"only {len(inside)} terminals survived, need {target}")
        sol = k_steiner_on_tree(emb.tree, root, inside, target)
        mapped = _witness_edges(emb, sol.edges)
        return sum(g.weight(x, y) for x, y in mapped), mapped

    def covered_by(edges):
        reach = _hops_from(_adj(edges), [root])
        return {t for t in terms if t in reach}

    rounds = 0
    if relaxed:
        required = math.ceil(k / 8)
        if root in terms and required <= 1:
            edges = frozenset()
        else:
            _, edges = _retry(lambda: relaxed_once(sorted(terms), k), constants)
    else:
        required = k
        edges = set()
        covered = covered_by(edges)
        repeats = max(1, math.ceil(constants.c_b * math.ceil(math.log2(max(g.n, 2)))))
        failures = 0
        while len(covered) < k:
            rounds += 1
            pool = sorted(terms - covered)
            need = k - len(covered)
            best = None
            for _ in range(repeats):
                try:
                    cand = relaxed_once(pool, need)
                except SamplingFailureError:
                    continue
                if best is None or cand[0] < best[0]:
                    best = cand
            if best is None:
                failures += 1
                if failures >= constants.retry_budget:
                    raise SamplingFailureError("k-Steiner rounds keep losing the terminals")
                continue
            edges |= best[1]
            covered = covered_by(edges)
        edges = frozenset(edges)
    edges = bfs_tree(edges, root)
    params = {"h": h, "k": k, "relaxed": relaxed, "rounds": rounds, "root": root,
              "embedding_hops": 8 * h, "beta": recipe.beta}
    return make_solution(g, edges, DemandSet.terminals(terms, k), budget, root=root, params=params,
                         required=required)


# group Steiner forest and online variants ---------------------------------

def _check_pairs(g, group_pairs):
    out = []
    for S, T in group_pairs:
        S, T = frozenset(int(v) for v in S), frozenset(int(v) for v in T)
        if not S or not T:
            raise InvalidInputError("group pairs need non-empty sides")
        _check_vertices(g, S | T)
        out.append((S, T))
    return out


def _rep_for(g, h, root, sets, q, rng, constants):
    def attempt():
        rep = build_repetition_tree(g, h, root, q, rng, constants)
        for s in sets:
            if not rep.lift(s):
                raise CoverageFailureError("a demand side has no copy in the repetition tree")
        return rep

    return _retry(attempt, constants)


def _lift(rep, s):
    return frozenset(rep.lift(s))


def solve_group_steiner_forest(g: WeightedGraph, h: int, group_pairs, rng,
                               constants: Constants = DEFAULT_CONSTANTS, q=None,
                               tree_solver=group_steiner_forest_on_tree) -> BicriteriaSolution:
    """Connect every ``(S_i, T_i)`` through a repetition tree rooted at vertex 0."""
    pairs = _check_pairs(g, group_pairs)
    todo = [(S, T) for S, T in pairs if not S & T]
    rep = _rep_for(g, h, 0, [x for p in todo for x in p], q, rng, constants)
    budget = 2 * _budget(max(c.beta for c in rep.constituents), 8 * h)
    edges: frozenset = frozenset()
    if todo:
        sol = tree_solver(rep.tree, [(_lift(rep, S), _lift(rep, T)) for S, T in todo])
        edges = map_tree_to_graph(rep, sol.edges).edges
    params = {"h": h, "q": rep.q, "embedding_hops": 8 * h}
    return make_solution(g, edges, DemandSet.group_pairs(pairs), budget, params=params)


def online_group_steiner(g: WeightedGraph, h: int, root: int, stream, rng,
                         constants: Constants = DEFAULT_CONSTANTS, q=None, universe=None) -> list:
    """One solution per revealed group; edge sets only grow.

    ``universe`` lists every group that may be revealed (defaults to the stream).
    """
    stream = [frozenset(int(v) for v in grp) for grp in stream]
    universe = stream if universe is None else [frozenset(grp) for grp in universe]
    _check_vertices(g, {root} | {v for grp in universe for v in grp})
    rep = _rep_for(g, h, root, universe, q, rng, constants)
    budget = _budget(max(c.beta for c in rep.constituents), 8 * h)
    solver = OnlineGroupTreeSolver(rep.tree, root)
    edges: set = set()
    out = []
    for t, grp in enumerate(stream):
        if root not in grp:
            added = solver.accept_group(_lift(rep, grp))
            edges |= map_tree_to_graph(rep, added).edges
        sol = make_solution(g, edges, DemandSet.groups(stream[: t + 1]), budget,
                            root=root, params={"h": h, "q": rep.q, "step": t, "root": root})
        if not sol.feasible:
            raise InfeasibleInstanceError(f"step {t}: revealed group not served within the hop budget")
        out.append(sol)
    return out


def online_group_steiner_forest(g: WeightedGraph, h: int, stream, rng,
                                constants: Constants = DEFAULT_CONSTANTS, q=None, universe=None) -> list:
    pairs = _check_pairs(g, stream)
    universe = pairs if universe is None else _check_pairs(g, universe)
    rep = _rep_for(g, h, 0, [x for p in universe if not p[0] & p[1] for x in p], q, rng, constants)
    budget = 2 * _budget(max(c.beta for c in rep.constituents), 8 * h)
    solver = OnlinePairTreeSolver(rep.tree)
    edges: set = set()
    out = []
    for t, (S, T) in enumerate(pairs):
        if not S & T:
            added = solver.accept_pair(_lift(rep, S), _lift(rep, T))
            edges |= map_tree_to_graph(rep, added).edges
        sol = make_solution(g, edges, DemandSet.group_pairs(pairs[: t + 1]), budget,
                            params={"h": h, "q": rep.q, "step": t})
        if not sol.feasible:
            raise InfeasibleInstanceError(f"step {t}: revealed pair not served within the hop budget")
        out.append(sol)
    return out
