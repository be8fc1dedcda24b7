"""Repetition tree embeddings: several partial trees glued at a common root."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import DEFAULT_CONSTANTS, Constants
from .connectors import project_subgraph
from .errors import InvalidInputError, InvalidParameterError
from .graph import Subgraph, WeightedGraph, norm_edge
from .partial_tree import PartialTreeEmbedding, RootedTree, sample_partial_tree_embedding

REP_EPSILON = 0.01


@dataclass(frozen=True)
class EdgeSet:
    """A set of normalized vertex pairs tagged with the side it lives on."""

    edges: frozenset
    side: str

    def __post_init__(self):
        if self.side not in ("graph", "tree"):
            raise InvalidParameterError(f"unknown side {self.side!r}")
        object.__setattr__(self, "edges", frozenset(norm_edge(int(a), int(b)) for a, b in self.edges))

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(sorted(self.edges))

    def __le__(self, other: "EdgeSet") -> bool:
        return self.side == other.side and self.edges <= other.edges


def default_repetitions(n: int, constants: Constants = DEFAULT_CONSTANTS) -> int:
    return max(1, int(constants.c_q * math.ceil(math.log2(max(n, 1)))))


@dataclass(frozen=True, eq=False)
class RepetitionTreeEmbedding:
    """Merged tree over copy ids ``i*n + v`` (the root keeps id ``root``)."""

    graph: WeightedGraph
    tree: RootedTree
    phi: dict
    provenance: dict
    constituents: tuple
    hop_bound: int
    root: int

    @property
    def q(self) -> int:
        return len(self.constituents)

    def copy_id(self, i: int, v: int) -> int:
        return self.root if v == self.root else i * self.graph.n + v

    def original(self, copy: int) -> int:
        return self.provenance[copy][1]

    def tree_weight(self, F) -> int:
        edges = F.edges if isinstance(F, EdgeSet) else F
        return sum(self.tree.edge_weight(a, b) for a, b in edges)

    def graph_weight(self, F) -> int:
        edges = F.edges if isinstance(F, EdgeSet) else F
        return sum(self.graph.weight(a, b) for a, b in edges)

    @property
    def hop_budget(self) -> float:
        """Hop bound on graph walks behind any tree path of one constituent."""
        return max(c.beta * c.hop_bound for c in self.constituents)

    @property
    def alpha_wc(self) -> float:
        return max(c.alpha_wc for c in self.constituents)

    def lift(self, vertices) -> set:
        return {c for v in vertices for c in self.phi.get(v, ())}

    def to_json(self) -> dict:
        t = self.tree
        edges = []
        for c, p, w in t.edges():
            i, v = self.provenance[c]
            wit = self.constituents[i].witness[v]
            edges.append({"u": c, "v": p, "w": w, "witness": list(wit.vertices)})
        return {
            "schema": 1,
            "root": t.root,
            "nodes": t.nodes,
            "edges": edges,
            "phi": {str(v): list(cs) for v, cs in sorted(self.phi.items())},
            "hop_bound": self.hop_bound,
            "q": self.q,
        }


def build_repetition_tree(g: WeightedGraph, h: int, root: int, q=None, rng=None,
                          constants: Constants = DEFAULT_CONSTANTS,
                          epsilon: float = REP_EPSILON) -> RepetitionTreeEmbedding:
    """Sample ``q`` rooted 8h-hop embeddings and identify their roots."""
    if q is None:
        q = default_repetitions(g.n, constants)
    if q < 1:
        raise InvalidParameterError("q must be >= 1")
    n = g.n
    cons = []
    parent: dict = {}
    weight: dict = {}
    phi: dict = {root: [root]}
    prov: dict = {root: (0, root)}
    for i in range(q):
        emb = sample_partial_tree_embedding(g, 8 * h, epsilon, root, rng, constants)
        cons.append(emb)

        def cid(v, i=i):
            return root if v == root else i * n + v

        for c, p, w in emb.tree.edges():
            parent[cid(c)] = cid(p)
            weight[cid(c)] = w
        for v in emb.tree.nodes:
            if v != root:
                phi.setdefault(v, []).append(cid(v))
                prov[cid(v)] = (i, v)
    tree = RootedTree(root, parent, weight)
    return RepetitionTreeEmbedding(
        g, tree, {v: tuple(cs) for v, cs in phi.items()}, prov, tuple(cons), int(h), int(root)
    )


def map_graph_to_tree(rep: RepetitionTreeEmbedding, F) -> EdgeSet:
    """Union over constituents of the projection ``T_i(G[F], h)``, in copy ids."""
    edges = F.edges if isinstance(F, EdgeSet) else frozenset(norm_edge(*e) for e in F)
    Subgraph(rep.graph, edges)  # validates F against E(G)
    out = set()
    for i, emb in enumerate(rep.constituents):
        proj = project_subgraph(emb, edges, rep.hop_bound)
        for a, b in proj.edges:
            out.add(norm_edge(rep.copy_id(i, a), rep.copy_id(i, b)))
    return EdgeSet(frozenset(out), "tree")


def map_tree_to_graph(rep: RepetitionTreeEmbedding, F) -> EdgeSet:
    """Union of the witness walks of the given tree edges."""
    edges = F.edges if isinstance(F, EdgeSet) else frozenset(norm_edge(*e) for e in F)
    out = set()
    for a, b in edges:
        try:
            c = rep.tree.child_of(a, b)
        except InvalidInputError:
            raise InvalidInputError(f"({a},{b}) is not an edge of the repetition tree") from None
        i, v = rep.provenance[c]
        out |= rep.constituents[i].witness[v].edge_set()
    return EdgeSet(frozenset(out), "graph")
