"""Weighted graphs, completion, hop-constrained distances and witness paths."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from . import kernels
from .errors import InvalidParameterError, InvalidWeightError, ParseError
from .kernels import INF

_OVERFLOW_LIMIT = 1 << 61


def norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected graph on vertices ``0..n-1`` with positive integer weights.

    ``weights`` is a symmetric int64 matrix with zero diagonal; an absent edge
    holds :data:`~hopcore.kernels.INF`.  Graphs built by :func:`complete_closure`
    have no absent edges.
    """

    weights: np.ndarray
    aspect_ratio: int
    labels: tuple | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        w = self.weights
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise InvalidWeightError("weight matrix must be square")
        if w.dtype != np.int64:
            raise InvalidWeightError("weight matrix must be int64")
        if not np.array_equal(w, w.T):
            raise InvalidWeightError("weights must be symmetric")
        if np.any(np.diag(w) != 0):
            raise InvalidWeightError("self-loops are not allowed")
        off = w[~np.eye(w.shape[0], dtype=bool)]
        if np.any(off < 1):
            raise InvalidWeightError("weights must be integers >= 1")
        finite = off[off < INF]
        if finite.size and int(finite.max()) * max(w.shape[0], 1) >= _OVERFLOW_LIMIT:
            raise InvalidWeightError("weights too large for exact 64-bit distances")
        w.setflags(write=False)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def is_complete(self) -> bool:
        return bool(np.all(self.weights < INF))

    def has_edge(self, u: int, v: int) -> bool:
        n = self.n
        return 0 <= u < n and 0 <= v < n and u != v and bool(self.weights[u, v] < INF)

    def weight(self, u: int, v: int) -> int:
        return int(self.weights[u, v])

    def edges(self) -> Iterator[tuple[int, int, int]]:
        iu, iv = np.nonzero(np.triu(self.weights < INF, k=1))
        for u, v in zip(iu.tolist(), iv.tolist()):
            yield u, v, int(self.weights[u, v])

    def neighbors(self, u: int) -> list[int]:
        row = self.weights[u]
        return [int(v) for v in np.flatnonzero(row < INF) if v != u]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, int]], aspect_ratio=None,
                   complete: bool = True, labels=None) -> "WeightedGraph":
        """Build a graph from ``(u, v, w)`` triples, completing it unless told not to."""
        if n < 1:
            raise InvalidParameterError("graph needs at least one vertex")
        w = np.full((n, n), INF, dtype=np.int64)
        np.fill_diagonal(w, 0)
        top = 0
        for u, v, x in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidParameterError(f"edge ({u},{v}) outside 0..{n - 1}")
            if u == v:
                raise InvalidWeightError(f"self-loop at {u}")
            if int(x) != x or x < 1:
                raise InvalidWeightError(f"edge ({u},{v}) has weight {x}; need integer >= 1")
            x = int(x)
            w[u, v] = w[v, u] = x
            top = max(top, x)
        L = int(aspect_ratio) if aspect_ratio is not None else max(top, 1)
        if top > L:
            raise InvalidWeightError(f"edge weight {top} exceeds declared L={L}")
        g = _make(w, L, labels)
        return complete_closure(g) if complete else g


def _make(w, L, labels=None):
    return WeightedGraph(w, int(L), labels)


def complete_closure(g: WeightedGraph) -> WeightedGraph:
    """Give every missing pair weight ``n^2 * L`` and raise the aspect ratio to match.

    Complete graphs are returned unchanged.
    """
    if g.is_complete:
        return g
    n, L = g.n, g.aspect_ratio
    big = n * n * L
    w = np.array(g.weights, copy=True)
    w[w >= INF] = big
    return _make(w, big, g.labels)


@dataclass(frozen=True, eq=False)
class Subgraph:
    """An edge subset of a parent graph."""

    parent: WeightedGraph
    edges: frozenset

    def __post_init__(self):
        clean = frozenset(norm_edge(int(u), int(v)) for u, v in self.edges)
        for u, v in clean:
            if not self.parent.has_edge(u, v):
                raise InvalidParameterError(f"({u},{v}) is not an edge of the parent graph")
        object.__setattr__(self, "edges", clean)

    @property
    def vertices(self) -> frozenset:
        return frozenset(x for e in self.edges for x in e)

    @property
    def weight(self) -> int:
        return sum(self.parent.weight(u, v) for u, v in self.edges)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {}
        for u, v in sorted(self.edges):
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        return adj


@dataclass(frozen=True)
class HopPath:
    """A walk in a graph; ``length`` is its total weight."""

    vertices: tuple
    length: int

    @property
    def hops(self) -> int:
        return len(self.vertices) - 1

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [norm_edge(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]

    def edge_set(self) -> frozenset:
        return frozenset(self.edges())

    def reversed(self) -> "HopPath":
        return HopPath(tuple(reversed(self.vertices)), self.length)

    def concat(self, other: "HopPath") -> "HopPath":
        if self.vertices[-1] != other.vertices[0]:
            raise InvalidParameterError("paths do not share the joining vertex")
        return HopPath(self.vertices + other.vertices[1:], self.length + other.length)

    @staticmethod
    def from_vertices(g: WeightedGraph, vertices) -> "HopPath":
        vs = tuple(int(x) for x in vertices)
        total = 0
        for a, b in zip(vs, vs[1:]):
            if not g.has_edge(a, b):
                raise InvalidParameterError(f"({a},{b}) is not an edge")
            total += g.weight(a, b)
        return HopPath(vs, total)


def _check_hops(h) -> int:
    if int(h) != h or h < 1:
        raise InvalidParameterError(f"hop bound must be an integer >= 1, got {h}")
    return int(h)


def effective_hops(g: WeightedGraph, h: int) -> int:
    # with positive weights an optimal walk never repeats a vertex
    return max(1, min(int(h), g.n - 1))


def _layers(g: WeightedGraph, src: int, h: int):
    key = ("layers", src, h)
    if key not in g._cache:
        g._cache[key] = kernels.hop_layers(g.weights, src, h)
    return g._cache[key]


def hop_distances(g: WeightedGraph, h: int) -> np.ndarray:
    """All-pairs ``d^(h)`` as an int64 matrix (``INF`` where unreachable)."""
    h = effective_hops(g, _check_hops(h))
    key = ("apsp", h)
    if key not in g._cache:
        if h >= g.n - 1:
            d = shortest_distances(g)
        else:
            d = kernels.all_pairs_hop(g.weights, h)
            d.setflags(write=False)
        g._cache[key] = d
    return g._cache[key]


def shortest_distances(g: WeightedGraph) -> np.ndarray:
    """Unconstrained shortest-path distances ``d_G``."""
    key = ("fw",)
    if key not in g._cache:
        d = kernels.floyd_warshall(g.weights)
        d.setflags(write=False)
        g._cache[key] = d
    return g._cache[key]


def hop_distance(g: WeightedGraph, u: int, v: int, h: int):
    """Minimum weight of a ``u``-``v`` walk with at most ``h`` hops.

    Returns ``math.inf`` when no such walk exists (only possible on incomplete graphs).
    """
    h = _check_hops(h)
    hh = effective_hops(g, h)
    dist, _ = _layers(g, int(u), hh)
    d = int(dist[hh, v])
    return math.inf if d >= INF else d


def hop_shortest_path(g: WeightedGraph, u: int, v: int, h: int) -> HopPath | None:
    """A lightest walk from ``u`` to ``v`` using at most ``h`` hops, or ``None``."""
    h = _check_hops(h)
    hh = effective_hops(g, h)
    dist, parent = _layers(g, int(u), hh)
    if dist[hh, v] >= INF:
        return None
    seq = [int(v)]
    k, x = hh, int(v)
    while k > 0:
        p = int(parent[k, x])
        if p >= 0:
            seq.append(p)
            x = p
        k -= 1
    seq.reverse()
    return HopPath(tuple(seq), int(dist[hh, v]))


@dataclass(frozen=True)
class TrivialApprox:
    table: np.ndarray
    alpha: float
    beta: float
    flag: bool
    violation: tuple | None


def trivial_metric_approx(g: WeightedGraph, h: int, alpha, beta) -> TrivialApprox:
    """Scale the shortest-path metric by ``alpha`` and check the hop sandwich.

    ``flag`` is the sufficient condition ``alpha * (beta*h + 1) >= L``.  Every pair
    is also scanned; the first pair breaking
    ``d^(beta h) <= alpha d_G <= alpha d^(h)`` is reported in ``violation`` as
    ``(u, v, d^(beta h), alpha d_G, alpha d^(h))``.
    """
    h = _check_hops(h)
    if alpha < 1 or beta < 1:
        raise InvalidParameterError("alpha and beta must be >= 1")
    bh = max(1, math.floor(beta * h))
    dg = shortest_distances(g)
    table = alpha * dg.astype(float)
    flag = alpha * (beta * h + 1) >= g.aspect_ratio
    lo = hop_distances(g, bh)
    hi = hop_distances(g, h)
    violation = None
    n = g.n
    for a in range(n):
        for b in range(a + 1, n):
            if dg[a, b] >= INF:
                continue
            scaled = alpha * int(dg[a, b])
            if int(lo[a, b]) > scaled or scaled > alpha * int(hi[a, b]):
                violation = (a, b, int(lo[a, b]), scaled, alpha * int(hi[a, b]))
                break
        if violation:
            break
    return TrivialApprox(table, alpha, beta, bool(flag), violation)


def unit_path_fixture(k: int, L: int) -> WeightedGraph:
    """Path ``v0..vk`` of unit edges with every non-edge given weight ``L``."""
    n = k + 1
    w = np.full((n, n), L, dtype=np.int64)
    np.fill_diagonal(w, 0)
    for i in range(k):
        w[i, i + 1] = w[i + 1, i] = 1
    return _make(w, L)


# text format --------------------------------------------------------------

def parse_graph(text: str, complete: bool = True) -> WeightedGraph:
    """Parse ``p n m L`` / ``e u v w`` text.  Lines starting with ``c`` or ``#`` are comments."""
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "c#":
            continue
        tok = line.split()
        try:
            if tok[0] == "p":
                if header is not None or len(tok) != 4:
                    raise ValueError("bad header")
                header = tuple(int(t) for t in tok[1:])
            elif tok[0] == "e":
                if header is None or len(tok) != 4:
                    raise ValueError("edge before header or wrong arity")
                edges.append(tuple(int(t) for t in tok[1:]))
            else:
                raise ValueError(f"unknown record {tok[0]!r}")
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}: {raw!r}") from None
    if header is None:
        raise ParseError("missing 'p n m L' header")
    n, m, L = header
    if n < 1 or L < 1:
        raise ParseError(f"header values must be positive: {header}")
    if m != len(edges):
        raise ParseError(f"header declares {m} edges, found {len(edges)}")
    return WeightedGraph.from_edges(n, edges, aspect_ratio=L, complete=complete)


def format_graph(g: WeightedGraph) -> str:
    es = list(g.edges())
    lines = [f"p {g.n} {len(es)} {g.aspect_ratio}"]
    lines += [f"e {u} {v} {w}" for u, v, w in es]
    return "\n".join(lines) + "\n"


def load_graph(path, complete: bool = True) -> WeightedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read(), complete=complete)
