"""Brute-force ground truth for tiny instances.

Nothing here calls into the graph, connector or solver modules; graphs are read
only as raw weight matrices so the checks stay independent of the code they
check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .demands import DemandSet
from .errors import BudgetExceededError, InvalidParameterError

ABSENT = 1 << 61
_HARD_CAP = 1 << 24


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 16
    max_hops: int = 16
    max_demands: int = 4
    max_enumeration: int = 1 << 22

    def __post_init__(self):
        if min(self.max_vertices, self.max_hops, self.max_demands, self.max_enumeration) < 1:
            raise InvalidParameterError("oracle budget entries must be positive")
        if self.max_enumeration > _HARD_CAP:
            raise InvalidParameterError("enumeration budget above the 2^24 guard")

    def need(self, what: str, size, limit) -> None:
        if size > limit:
            raise BudgetExceededError(f"{what} = {size} exceeds oracle budget {limit}")


DEFAULT_BUDGET = OracleBudget()


def _edge_arrays(weights):
    w = np.asarray(weights)
    n = w.shape[0]
    us, vs, ws = [], [], []
    for u in range(n):
        for v in range(u + 1, n):
            if 0 < w[u, v] < ABSENT:
                us.append(u)
                vs.append(v)
                ws.append(int(w[u, v]))
    return n, us, vs, ws


def brute_hop_table(g, u: int, h: int, budget: OracleBudget = DEFAULT_BUDGET) -> list:
    """Minimum length to every vertex over all walks from ``u`` with at most ``h`` hops.

    Unreachable entries are ``math.inf``.  Walks are expanded explicitly, one
    stack frame per hop.
    """
    w = np.asarray(g.weights)
    n = w.shape[0]
    budget.need("vertices", n, budget.max_vertices)
    budget.need("walks", sum(n ** j for j in range(h + 1)), budget.max_enumeration)
    nbrs = [[(v, int(w[x, v])) for v in range(n) if v != x and w[x, v] < ABSENT] for x in range(n)]
    best = [math.inf] * n
    best[u] = 0
    stack = [(u, 0, 0)]
    while stack:
        x, length, hops = stack.pop()
        if length < best[x]:
            best[x] = length
        if hops == h:
            continue
        for v, wx in nbrs[x]:
            stack.append((v, length + wx, hops + 1))
    return best


def brute_hop_distance(g, u: int, v: int, h: int, budget: OracleBudget = DEFAULT_BUDGET):
    if h < 1:
        raise InvalidParameterError("hop bound must be >= 1")
    return brute_hop_table(g, u, h, budget)[v]


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    cost: float
    edges: frozenset
    certificate: tuple = ()

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "feasible": self.feasible,
            "cost": self.cost if self.feasible else None,
            "edges": [list(e) for e in sorted(self.edges)],
            "certificate": [list(c) if isinstance(c, tuple) else c for c in self.certificate],
        }


class _Subsets:
    """All edge subsets of a small graph, evaluated in blocks with numpy bitsets."""

    def __init__(self, n, us, vs, ws, budget):
        self.n = n
        self.us = np.array(us, dtype=np.int64)
        self.vs = np.array(vs, dtype=np.int64)
        self.ws = np.array(ws, dtype=np.int64)
        m = len(us)
        budget.need("edge subsets", 1 << m, budget.max_enumeration)
        self.m = m
        total = np.zeros(1, dtype=np.int64)
        for x in ws:
            total = np.concatenate([total, total + x])
        self.total = total
        self.order = np.lexsort((np.arange(total.size), total))

    def reach(self, inc, start, hops):
        """Bool ``(B, n)``: vertices within ``hops`` hops of the ``start`` mask."""
        r = np.repeat(start[None, :], inc.shape[0], axis=0)
        for _ in range(hops):
            nxt = r.copy()
            for e in range(self.m):
                a, b = self.us[e], self.vs[e]
                nxt[:, b] |= r[:, a] & inc[:, e]
                nxt[:, a] |= r[:, b] & inc[:, e]
            if np.array_equal(nxt, r):
                break
            r = nxt
        return r

    def first_feasible(self, check, block=4096):
        for lo in range(0, self.order.size, block):
            masks = self.order[lo : lo + block]
            inc = ((masks[:, None] >> np.arange(self.m)) & 1).astype(bool)
            ok = check(inc)
            hit = np.flatnonzero(ok)
            if hit.size:
                mask = int(masks[hit[0]])
                edges = frozenset(
                    (int(self.us[e]), int(self.vs[e])) for e in range(self.m) if mask >> e & 1
                )
                return int(self.total[mask]), edges
        return None

    def onehot(self, vertices):
        s = np.zeros(self.n, dtype=bool)
        s[list(vertices)] = True
        return s


def _checker(sub: _Subsets, demand: DemandSet, hops: int, root):
    n = sub.n
    hops = min(hops, max(n - 1, 1))
    if demand.kind == "pairs":
        def check(inc):
            ok = np.ones(inc.shape[0], dtype=bool)
            for s, t in demand.payload:
                if s != t:
                    ok &= sub.reach(inc, sub.onehot([s]), hops)[:, t]
            return ok
    elif demand.kind == "groups":
        def check(inc):
            r = sub.reach(inc, sub.onehot([root]), hops)
            ok = np.ones(inc.shape[0], dtype=bool)
            for grp in demand.payload:
                ok &= r[:, sorted(grp)].any(axis=1)
            return ok
    elif demand.kind == "group-pairs":
        def check(inc):
            ok = np.ones(inc.shape[0], dtype=bool)
            for S, T in demand.payload:
                ok &= sub.reach(inc, sub.onehot(S), hops)[:, sorted(T)].any(axis=1)
            return ok
    else:
        terms, k = demand.payload

        def check(inc):
            comp = sub.reach(inc, sub.onehot([root]), max(n - 1, 1))
            ok = comp[:, sorted(terms)].sum(axis=1) >= k
            for x in range(n):
                rx = sub.reach(inc, sub.onehot([x]), hops)
                # every component vertex must be within `hops` of every other
                bad = comp[:, x] & np.any(comp & ~rx, axis=1)
                ok &= ~bad
            return ok
    return check


def brute_optimum(g, h: int, demand: DemandSet, budget: OracleBudget = DEFAULT_BUDGET,
                  root=None) -> OracleResult:
    """Cheapest edge set meeting ``demand`` within ``h`` hops (hop diameter for terminals).

    Subsets are scanned in increasing total weight; the first feasible one wins.
    When even the full edge set fails, the result is infeasible and
    ``certificate`` lists the demands that cannot be met.
    """
    if h < 1:
        raise InvalidParameterError("hop bound must be >= 1")
    if demand.kind in ("groups", "terminals") and root is None:
        raise InvalidParameterError(f"{demand.kind} demands need a root")
    n, us, vs, ws = _edge_arrays(g.weights)
    budget.need("vertices", n, budget.max_vertices)
    budget.need("demands", len(demand), budget.max_demands)
    h = min(h, max(n - 1, 1))  # reach saturates after n-1 rounds
    budget.need("hops", h, budget.max_hops)
    sub = _Subsets(n, us, vs, ws, budget)
    if demand.kind == "terminals":
        # a bigger component can break the diameter bound, so no monotone shortcut
        found = sub.first_feasible(_checker(sub, demand, h, root))
        if found is None:
            return OracleResult(False, math.inf, frozenset(), (0,))
        return OracleResult(True, found[0], found[1])
    full = np.ones((1, sub.m), dtype=bool)
    if not _checker(sub, demand, h, root)(full)[0]:
        bad = []
        for i, item in enumerate(demand.payload):
            one = DemandSet(demand.kind, (item,))
            if not _checker(sub, one, h, root)(full)[0]:
                bad.append(i)
        return OracleResult(False, math.inf, frozenset(), tuple(bad))
    found = sub.first_feasible(_checker(sub, demand, h, root))
    cost, edges = found
    return OracleResult(True, cost, edges)


def _simple_paths(nbrs, s, t, h):
    out = []
    stack = [(s, (s,))]
    while stack:
        x, path = stack.pop()
        if x == t:
            out.append(path)
            continue
        if len(path) - 1 == h:
            continue
        for y in nbrs[x]:
            if y not in path:
                stack.append((y, path + (y,)))
    return out


def brute_network_design(g, h: int, pairs, f, budget: OracleBudget = DEFAULT_BUDGET) -> OracleResult:
    """Best assignment of simple ``<= h``-hop paths to pairs under cost ``sum w(e) f(load_e)``."""
    w = np.asarray(g.weights)
    n = w.shape[0]
    budget.need("vertices", n, budget.max_vertices)
    budget.need("demands", len(pairs), budget.max_demands)
    h = min(h, max(n - 1, 1))
    nbrs = [[v for v in range(n) if v != x and w[x, v] < ABSENT] for x in range(n)]
    options = []
    for i, (s, t) in enumerate(pairs):
        opts = [()] if s == t else [
            tuple((min(a, b), max(a, b)) for a, b in zip(p, p[1:])) for p in _simple_paths(nbrs, s, t, h)
        ]
        if not opts:
            return OracleResult(False, math.inf, frozenset(), (i,))
        options.append(opts)
    budget.need("path assignments", math.prod(len(o) for o in options), budget.max_enumeration)
    best, best_edges = math.inf, frozenset()
    for combo in itertools.product(*options):
        load: dict = {}
        for p in combo:
            for e in set(p):
                load[e] = load.get(e, 0) + 1
        cost = sum(int(w[a, b]) * f(l) for (a, b), l in load.items())
        if cost < best:
            best, best_edges = cost, frozenset(load)
    return OracleResult(True, best, best_edges)


def brute_hop_connectivity_graph(g, marked, h: int, budget: OracleBudget = DEFAULT_BUDGET):
    """Components of ``(W, P^(h)(W))`` and the vertex set each component's paths cover.

    ``g`` is an iterable of vertex pairs (or anything with ``.edges`` pairs).
    Every simple path of at most ``h`` hops whose only marked vertices are its two
    ends is enumerated.  Returns a list of ``(members, covered_vertices)``.
    """
    edges = getattr(g, "edges", g)
    edges = [(e[0], e[1]) for e in (edges() if callable(edges) else edges)]
    W = sorted(set(int(w) for w in marked))
    nbrs: dict = {}
    for a, b in edges:
        a, b = int(a), int(b)
        nbrs.setdefault(a, set()).add(b)
        nbrs.setdefault(b, set()).add(a)
    budget.need("vertices", len(set(nbrs) | set(W)), budget.max_vertices)
    budget.need("hops", h, budget.max_hops)
    Wset = set(W)
    label = {w: w for w in W}
    cover = {w: set() for w in W}

    def root(x):
        while label[x] != x:
            x = label[x]
        return x

    found = []
    for s in W:
        stack = [(s, (s,))]
        while stack:
            x, path = stack.pop()
            if x != s and x in Wset:
                found.append(path)
                continue
            if len(path) - 1 == h:
                continue
            for y in sorted(nbrs.get(x, ())):
                if y not in path:
                    stack.append((y, path + (y,)))
    for path in found:
        a, b = root(path[0]), root(path[-1])
        if a != b:
            label[max(a, b)] = min(a, b)
    for path in found:
        cover[root(path[0])].update(path)
    comps: dict = {}
    for w in W:
        comps.setdefault(root(w), set()).add(w)
    return [(frozenset(m), frozenset(cover[r])) for r, m in sorted(comps.items())]


# tree optima ---------------------------------------------------------------

def _tree_subsets(tree_edges, budget):
    nodes = sorted({x for a, b, _ in tree_edges for x in (a, b)})
    idx = {v: i for i, v in enumerate(nodes)}
    us = [idx[a] for a, _, _ in tree_edges]
    vs = [idx[b] for _, b, _ in tree_edges]
    ws = [w for _, _, w in tree_edges]
    return nodes, idx, _Subsets(len(nodes), us, vs, ws, budget)


def _relabel(edges, nodes):
    return frozenset((min(nodes[a], nodes[b]), max(nodes[a], nodes[b])) for a, b in edges)


def brute_tree_group_steiner(tree_edges, root, groups, budget: OracleBudget = DEFAULT_BUDGET):
    """Cheapest edge subset joining ``root`` to a vertex of every group.

    ``tree_edges`` holds ``(a, b, w)`` triples.  Returns ``(cost, edges)`` or ``None``.
    """
    if not tree_edges:
        ok = all(root in grp for grp in groups)
        return (0, frozenset()) if ok else None
    nodes, idx, sub = _tree_subsets(tree_edges, budget)
    if root not in idx:
        return None
    lifted = [[idx[v] for v in grp if v in idx] for grp in groups]
    if any(not g for g in lifted):
        return None

    def check(inc):
        r = sub.reach(inc, sub.onehot([idx[root]]), sub.n)
        ok = np.ones(inc.shape[0], dtype=bool)
        for g in lifted:
            ok &= r[:, g].any(axis=1)
        return ok

    found = sub.first_feasible(check)
    return None if found is None else (found[0], _relabel(found[1], nodes))


def brute_tree_k_steiner(tree_edges, root, terminals, k, budget: OracleBudget = DEFAULT_BUDGET):
    if not tree_edges:
        return (0, frozenset()) if (k <= (1 if root in terminals else 0)) else None
    nodes, idx, sub = _tree_subsets(tree_edges, budget)
    ts = [idx[t] for t in terminals if t in idx]

    def check(inc):
        r = sub.reach(inc, sub.onehot([idx[root]]), sub.n)
        return r[:, ts].sum(axis=1) >= k

    found = sub.first_feasible(check)
    return None if found is None else (found[0], _relabel(found[1], nodes))


def brute_tree_steiner_forest(tree_edges, pairs, budget: OracleBudget = DEFAULT_BUDGET):
    if not tree_edges:
        return (0, frozenset()) if all(s == t for s, t in pairs) else None
    nodes, idx, sub = _tree_subsets(tree_edges, budget)

    def check(inc):
        ok = np.ones(inc.shape[0], dtype=bool)
        for s, t in pairs:
            if s != t:
                ok &= sub.reach(inc, sub.onehot([idx[s]]), sub.n)[:, idx[t]]
        return ok

    found = sub.first_feasible(check)
    return None if found is None else (found[0], _relabel(found[1], nodes))
