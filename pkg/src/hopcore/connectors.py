"""h-hop connectors and the projection of graph subgraphs onto partial trees."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import InvalidInputError, PreconditionViolation
from .graph import Subgraph, WeightedGraph, norm_edge
from .partial_tree import PartialTreeEmbedding


def adjacency(g, extra_vertices=()) -> dict[int, list[int]]:
    """Sorted adjacency lists of a WeightedGraph, Subgraph or iterable of edge pairs."""
    if isinstance(g, WeightedGraph):
        adj = {v: g.neighbors(v) for v in range(g.n)}
    else:
        edges = g.edges if isinstance(g, Subgraph) else g
        adj = {}
        for e in edges:
            u, v = int(e[0]), int(e[1])
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        adj = {v: sorted(ns) for v, ns in adj.items()}
    for v in extra_vertices:
        adj.setdefault(int(v), [])
    return adj


def _edge_list(adj) -> list[tuple[int, int]]:
    return sorted({norm_edge(u, v) for u, ns in adj.items() for v in ns})


def _bfs(adj, src, limit=None, blocked=frozenset()) -> dict[int, int]:
    """Hop distances from ``src``; vertices in ``blocked`` are reached but not expanded."""
    dist = {src: 0}
    q = deque([src])
    while q:
        x = q.popleft()
        if x != src and x in blocked:
            continue
        if limit is not None and dist[x] >= limit:
            continue
        for y in adj.get(x, ()):
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def _bfs_parents(adj, sources, blocked=frozenset()):
    """Multi-source BFS keeping the lexicographically smallest shortest predecessor."""
    dist = {s: 0 for s in sources}
    par: dict = {s: None for s in sources}
    frontier = sorted(sources)
    while frontier:
        nxt = []
        for x in frontier:
            if dist[x] > 0 and x in blocked:
                continue
            for y in adj.get(x, ()):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    par[y] = x
                    nxt.append(y)
        frontier = sorted(nxt)
    return dist, par


def _tree_path(par, a):
    out = [a]
    while par[out[-1]] is not None:
        out.append(par[out[-1]])
    return out


@dataclass(frozen=True)
class HopConnector:
    """Paths (vertex tuples, walks allowed) between marked vertices."""

    paths: tuple
    marked: frozenset

    def congestion(self) -> dict:
        load: dict = {}
        for p in self.paths:
            for a, b in zip(p, p[1:]):
                e = norm_edge(a, b)
                load[e] = load.get(e, 0) + 1
        return load

    @property
    def congestion_max(self) -> int:
        return max(self.congestion().values(), default=0)

    @property
    def hop_max(self) -> int:
        return max((len(p) - 1 for p in self.paths), default=0)

    def components(self) -> list[frozenset]:
        """Components of the endpoint graph (W, paths)."""
        parent = {w: w for w in self.marked}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for p in self.paths:
            a, b = find(p[0]), find(p[-1])
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: dict = {}
        for w in self.marked:
            groups.setdefault(find(w), set()).add(w)
        return sorted((frozenset(s) for s in groups.values()), key=min)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "paths": [list(p) for p in self.paths],
            "congestion_max": self.congestion_max,
            "hop_max": self.hop_max,
        }


def _check_tree(adj) -> None:
    verts = list(adj)
    if not verts:
        return
    m = sum(len(ns) for ns in adj.values()) // 2
    if m != len(verts) - 1 or len(_bfs(adj, verts[0])) != len(verts):
        raise InvalidInputError("input is not a tree")


def _hop_diameter(adj) -> int:
    if not adj:
        return 0
    d = _bfs(adj, min(adj))
    far = max(d, key=lambda v: (d[v], -v))
    return max(_bfs(adj, far).values())


def euler_tour_connector(tree, marked, h: int, beta) -> HopConnector:
    """Connector on a tree from an Euler tour restricted to the marked vertices.

    Consecutive marked visits are joined by their tree path.  Each tree edge is
    walked twice by the tour, so congestion is at most 2.
    """
    W = frozenset(int(w) for w in marked)
    adj = adjacency(tree, W)
    _check_tree(adj)
    if _hop_diameter(adj) > beta * h:
        raise PreconditionViolation(f"tree hop diameter exceeds beta*h = {beta * h}")
    if len(W) <= 1:
        return HopConnector((), W)
    start = min(adj)
    tour = [start]
    seen = {start}
    stack = [(start, iter(adj[start]))]
    parent = {start: None}
    while stack:
        x, it = stack[-1]
        y = next((y for y in it if y not in seen), None)
        if y is None:
            stack.pop()
            if stack:
                tour.append(stack[-1][0])
            continue
        seen.add(y)
        parent[y] = x
        tour.append(y)
        stack.append((y, iter(adj[y])))
    seq = []
    for x in tour:
        if x in W and (not seq or seq[-1] != x):
            seq.append(x)
    if len(seq) > 1 and seq[-1] == seq[0]:
        seq.pop()
    depth = {start: 0}
    for x in tour:
        if parent[x] is not None and x not in depth:
            depth[x] = depth[parent[x]] + 1
    paths = []
    for a, b in zip(seq, seq[1:]):
        up, down = [a], [b]
        while up[-1] != down[-1]:
            if depth[up[-1]] >= depth[down[-1]]:
                up.append(parent[up[-1]])
            else:
                down.append(parent[down[-1]])
        paths.append(tuple(up + down[-2::-1]))
    return HopConnector(tuple(paths), W)


def hop_components(g, marked, h: int) -> list[frozenset]:
    """Components of W under "joined by a path of at most h hops avoiding W inside"."""
    W = frozenset(int(w) for w in marked)
    adj = adjacency(g, W)
    comp: dict = {}
    out = []
    for w in sorted(W):
        if w in comp:
            continue
        members = {w}
        todo = [w]
        while todo:
            x = todo.pop()
            for y in _bfs(adj, x, limit=h, blocked=W):
                if y in W and y not in members:
                    members.add(y)
                    todo.append(y)
        for x in members:
            comp[x] = len(out)
        out.append(frozenset(members))
    return out


def _wrap(g, edges):
    parent = g.parent if isinstance(g, Subgraph) else g if isinstance(g, WeightedGraph) else None
    return Subgraph(parent, frozenset(edges)) if parent is not None else frozenset(edges)


def extract_connector_forest(g, marked, h: int):
    """A forest preserving h-hop connectivity of W, with 2h-hop paths inside it.

    Per h-hop component of W, grows a tree from its lowest vertex: repeatedly
    take the lowest unattached member with an h-hop W-avoiding path to the tree's
    marked set, follow the lexicographically smallest shortest such path until
    it first meets the tree, and attach it there.
    """
    W = frozenset(int(w) for w in marked)
    adj = adjacency(g, W)
    forest: set = set()
    for comp in hop_components(g, W, h):
        attached = {min(comp)}
        tree_adj: dict = {min(comp): []}
        while attached != comp:
            # shortest W-avoiding paths from the attached set, predecessor-minimal
            dist, par = _bfs_parents(adj, attached, blocked=W)
            cand = [u for u in sorted(comp - attached) if dist.get(u, h + 1) <= h]
            if not cand:  # unreachable given hop_components; kept as a guard
                raise InvalidInputError("h-hop component could not be grown")
            u = cand[0]
            path = _tree_path(par, u)  # u ... attached vertex
            cut = next(i for i, x in enumerate(path) if x in tree_adj)
            # the tree already joins the cut vertex to the attached set
            prefix = path[: cut + 1]
            for a, b in zip(prefix, prefix[1:]):
                forest.add(norm_edge(a, b))
                tree_adj.setdefault(a, []).append(b)
                tree_adj.setdefault(b, []).append(a)
            for a in tree_adj:
                tree_adj[a].sort()
            attached.add(u)
    return _wrap(g, forest)


def build_hop_connector(g, marked, h: int) -> HopConnector:
    """Connector with congestion at most 4 and paths of at most 8h hops."""
    W = frozenset(int(w) for w in marked)
    if not W:
        return HopConnector((), W)
    forest = extract_connector_forest(g, W, h)
    fadj = adjacency(forest, W)
    depth: dict = {}
    for r in sorted(fadj):
        if r in depth:
            continue
        for v, d in _bfs(fadj, r).items():
            depth[v] = d
    paths = []
    for offset in (0, 2 * h):
        band = {}
        for v, d in depth.items():
            if d >= offset:
                band[v] = (d - offset) // (4 * h)
            else:
                band[v] = -1
        sub: dict = {v: [] for v in fadj}
        for u, ns in fadj.items():
            for v in ns:
                if band[u] == band[v]:
                    sub[u].append(v)
        done: set = set()
        for s in sorted(sub):
            if s in done:
                continue
            piece = _bfs(sub, s)
            done |= set(piece)
            mk = W & set(piece)
            if len(mk) < 2:
                continue
            pa = {v: sub[v] for v in piece}
            conn = euler_tour_connector(_edge_list(pa) or [], mk, h, 8)
            paths.extend(conn.paths)
    # the two families often produce the same path; one copy is enough
    unique = {}
    for p in paths:
        unique.setdefault(min(p, p[::-1]), p)
    return HopConnector(tuple(unique.values()), W)


@dataclass(frozen=True)
class Projection:
    """Tree edges (normalized node pairs) of T(H, h) and their total tree weight."""

    edges: frozenset
    weight: int
    source: frozenset
    h: int


def h_hop_pairs(H, vertices, h: int) -> list[tuple[int, int]]:
    """Pairs ``u < v`` of ``vertices`` within ``h`` hops of each other in ``H``."""
    adj = adjacency(H)
    vs = sorted(set(vertices) & set(adj))
    vset = set(vs)
    out = []
    for u in vs:
        for v in _bfs(adj, u, limit=h):
            if v > u and v in vset:
                out.append((u, v))
    return out


def tree_path_union(tree, pairs) -> frozenset:
    edges = set()
    for u, v in pairs:
        for c in tree.path_edges(u, v):
            edges.add(tree.edge_key(c))
    return frozenset(edges)


def project_subgraph(embedding: PartialTreeEmbedding, H, h: int) -> Projection:
    """Union of tree paths between embedded vertices that are within ``h`` hops in ``H``."""
    if embedding.hop_bound != 8 * h:
        raise PreconditionViolation(
            f"projection with h={h} needs an {8 * h}-hop embedding, got {embedding.hop_bound}"
        )
    tree = embedding.tree
    H_edges = frozenset(norm_edge(int(a), int(b)) for a, b in (H.edges if isinstance(H, Subgraph) else H))
    edges = tree_path_union(tree, h_hop_pairs(H_edges, tree.nodes, h))
    weight = sum(tree.edge_weight(a, b) for a, b in edges)
    return Projection(edges, weight, H_edges, h)


def projection_certificate(embedding: PartialTreeEmbedding, H, h: int) -> dict:
    """Numbers behind the projection cost bound.

    Builds the connector on ``V(T)`` inside ``H``, checks ``T(H,h)`` lies inside
    the tree paths of the connector endpoints and reports both weights against
    ``4 alpha w(H)`` and ``C alpha w(H)`` where ``C`` is the realised congestion.
    """
    g = embedding.graph
    H_edges = frozenset(norm_edge(int(a), int(b)) for a, b in (H.edges if isinstance(H, Subgraph) else H))
    w_H = sum(g.weight(a, b) for a, b in H_edges)
    proj = project_subgraph(embedding, H_edges, h)
    tree = embedding.tree
    marked = set(tree.nodes) & {x for e in H_edges for x in e}
    conn = build_hop_connector(H_edges, marked, h)
    via = tree_path_union(tree, [(p[0], p[-1]) for p in conn.paths])
    w_via = sum(tree.edge_weight(a, b) for a, b in via)
    alpha = embedding.alpha_wc
    C = conn.congestion_max
    return {
        "projection_weight": proj.weight,
        "connector_weight": w_via,
        "subgraph_weight": w_H,
        "alpha": alpha,
        "congestion": C,
        "bound_4": 4 * alpha * w_H,
        "bound_C": C * alpha * w_H,
        "contained": proj.edges <= via,
        "ok": proj.edges <= via and proj.weight <= w_via <= C * alpha * w_H <= 4 * alpha * w_H,
    }
