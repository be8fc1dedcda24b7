"""Well-separated partial tree metrics and h-hop partial tree embeddings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import DEFAULT_CONSTANTS, Constants
from .decomposition import DecompositionParams, hop_constrained_decomposition
from .errors import (
    InvalidInputError,
    InvalidParameterError,
    SamplingFailureError,
    WitnessTooHeavyError,
)
from .graph import HopPath, WeightedGraph, hop_distances, hop_shortest_path
from .kernels import INF


@dataclass(frozen=True, eq=False)
class RootedTree:
    """A rooted tree given by parent links; ``weight[c]`` is the weight of edge (c, parent[c])."""

    root: int | None
    parent: dict
    weight: dict

    def __post_init__(self):
        if self.root is None:
            if self.parent:
                raise InvalidInputError("rootless tree with edges")
            return
        if self.root in self.parent:
            raise InvalidInputError("root has a parent")
        if set(self.parent) != set(self.weight):
            raise InvalidInputError("every child edge needs a weight")
        # every node must reach the root
        for v in self.parent:
            seen = 0
            x = v
            while x != self.root:
                x = self.parent.get(x)
                seen += 1
                if x is None or seen > len(self.parent):
                    raise InvalidInputError(f"node {v} does not reach the root")

    @property
    def nodes(self) -> list:
        if self.root is None:
            return []
        return sorted({self.root, *self.parent})

    def __contains__(self, v) -> bool:
        return v == self.root or v in self.parent

    def __len__(self) -> int:
        return 0 if self.root is None else len(self.parent) + 1

    def edges(self) -> list[tuple[int, int, int]]:
        """``(child, parent, weight)`` for every edge, sorted by child."""
        return [(c, self.parent[c], self.weight[c]) for c in sorted(self.parent)]

    def edge_key(self, child) -> tuple:
        p = self.parent[child]
        return (child, p) if child < p else (p, child)

    def child_of(self, a, b):
        """The endpoint of tree edge {a, b} that is the child."""
        if self.parent.get(a) == b:
            return a
        if self.parent.get(b) == a:
            return b
        raise InvalidInputError(f"({a},{b}) is not a tree edge")

    def edge_weight(self, a, b) -> int:
        return self.weight[self.child_of(a, b)]

    def children(self) -> dict:
        ch: dict = {v: [] for v in self.nodes}
        for c in sorted(self.parent):
            ch[self.parent[c]].append(c)
        return ch

    def depth(self, v) -> int:
        d = 0
        while v != self.root:
            v = self.parent[v]
            d += 1
        return d

    def path_edges(self, u, v) -> list:
        """Children keying the edges on the tree path between ``u`` and ``v``."""
        up_u, up_v = [], []
        du, dv = self.depth(u), self.depth(v)
        while du > dv:
            up_u.append(u)
            u = self.parent[u]
            du -= 1
        while dv > du:
            up_v.append(v)
            v = self.parent[v]
            dv -= 1
        while u != v:
            up_u.append(u)
            up_v.append(v)
            u, v = self.parent[u], self.parent[v]
        return up_u + up_v[::-1]

    def path_vertices(self, u, v) -> list:
        out = [u]
        for c in self.path_edges(u, v):
            p = self.parent[c]
            out.append(p if out[-1] == c else c)
        return out

    def distance(self, u, v) -> int:
        return sum(self.weight[c] for c in self.path_edges(u, v))

    def _ancestry(self):
        nodes = self.nodes
        idx = {v: i for i, v in enumerate(nodes)}
        depth = np.array([self.depth(v) for v in nodes], dtype=np.int64)
        k = int(depth.max()) + 1 if nodes else 0
        anc = np.full((len(nodes), k), -1, dtype=np.int64)
        up = np.zeros(len(nodes), dtype=np.int64)
        for v in nodes:
            i = idx[v]
            x, d = v, int(depth[i])
            anc[i, d] = i
            while x != self.root:
                up[i] += self.weight[x]
                x = self.parent[x]
                d -= 1
                anc[i, d] = idx[x]
        return nodes, idx, depth, anc, up

    def lca_matrix(self):
        """``(nodes, lca_index)`` with ``lca_index[i, j]`` the position of the LCA in ``nodes``."""
        nodes, idx, depth, anc, up = self._ancestry()
        same = (anc[:, None, :] == anc[None, :, :]) & (anc[:, None, :] >= 0)
        deepest = same.shape[2] - 1 - np.argmax(same[:, :, ::-1], axis=2)
        lca = anc[np.arange(len(nodes))[:, None], deepest]
        return nodes, lca

    def distance_matrix(self, values=None):
        """All-pairs tree distances over ``nodes``; ``values`` re-weights edges by child."""
        nodes, idx, depth, anc, up = self._ancestry()
        if values is not None:
            up = np.zeros(len(nodes), dtype=np.int64)
            for v in nodes:
                x = v
                while x != self.root:
                    up[idx[v]] += values[x]
                    x = self.parent[x]
        _, lca = self.lca_matrix()
        return nodes, up[:, None] + up[None, :] - 2 * up[lca]

    def hop_diameter(self) -> int:
        if len(self) <= 1:
            return 0
        nodes, lca = self.lca_matrix()
        depth = np.array([self.depth(v) for v in nodes], dtype=np.int64)
        return int((depth[:, None] + depth[None, :] - 2 * depth[lca]).max())

    def is_well_separated(self) -> bool:
        """Weights are powers of two and every child edge weighs at most half its parent edge."""
        for c, p, w in self.edges():
            if w < 1 or w & (w - 1):
                return False
            if p != self.root and 2 * w > self.weight[p]:
                return False
        return True


@dataclass(frozen=True, eq=False)
class WellSeparatedTree(RootedTree):
    """Rooted tree with power-of-two weights that at least halve down every root path."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_well_separated():
            raise InvalidInputError("tree is not well-separated")


@dataclass(frozen=True, eq=False)
class TreeRecipe:
    """Scale choices shared by every level of one tree sample."""

    h: int
    epsilon: float
    edge_hops: int
    kappa: float
    gamma: float
    delta0: int
    levels: int
    rho: float
    constants: Constants

    @property
    def alpha_wc(self) -> float:
        return self.constants.c_alpha * self.kappa

    @property
    def hop_diameter_bound(self) -> int:
        return 2 * (self.levels - 1) + 2

    @property
    def beta(self) -> float:
        return self.constants.c_beta * (self.edge_hops / self.h) * self.hop_diameter_bound


def tree_recipe(g: WeightedGraph, h: int, epsilon: float, constants: Constants = DEFAULT_CONSTANTS) -> TreeRecipe:
    if int(h) != h or h < 1:
        raise InvalidParameterError("hop bound must be an integer >= 1")
    if not 0 < epsilon < 1 / 3:
        raise InvalidParameterError("epsilon must lie in (0, 1/3)")
    h = int(h)
    key = ("recipe", h, float(epsilon), constants)
    if key in g._cache:
        return g._cache[key]
    rho = constants.c_pad * math.log(max(g.n, 2))
    # levels depend on delta0, which depends on h'; h' only needs an upper bound on
    # levels, so iterate to a fixed point (converges in a couple of rounds)
    levels = (g.aspect_ratio - 1).bit_length() + 1
    for _ in range(64):
        gamma = epsilon / (constants.c_gamma * levels)
        kappa = constants.c_kappa * 2 * rho / gamma
        edge_hops = math.ceil(kappa * h)
        d = hop_distances(g, edge_hops)
        off = d[~np.eye(g.n, dtype=bool)]
        if off.size and off.max() >= INF:
            raise InvalidInputError(
                f"graph is not {edge_hops}-hop connected; complete it first"
            )
        top = max(g.aspect_ratio, int(off.max()) if off.size else 1)
        delta0 = 1 << max(0, (top - 1).bit_length())
        new_levels = delta0.bit_length()  # log2(delta0) + 1
        if new_levels <= levels:
            break
        levels = new_levels
    recipe = TreeRecipe(h, float(epsilon), edge_hops, kappa, gamma, delta0, levels, rho, constants)
    g._cache[key] = recipe
    return recipe


class _RootLost(Exception):
    pass


def _build(g, recipe, verts, delta, rng, root, parent, weight):
    """Recursive construction on ``verts`` with edge weight ``delta``; returns the subtree root."""
    if len(verts) == 1:
        return next(iter(verts))
    part = hop_constrained_decomposition(
        g, recipe.edge_hops, Fraction(delta, 2), recipe.gamma, rng,
        DecompositionParams(pad_constant=recipe.constants.c_pad), vertices=verts,
    )
    if root is not None and root in part.excluded:
        raise _RootLost
    parts = sorted(part.parts, key=min)
    if not parts:
        return None
    if root is not None and root in verts:
        first = next(i for i, p in enumerate(parts) if root in p)
    else:
        first = 0
    parts.insert(0, parts.pop(first))
    roots = []
    for p in parts:
        r = _build(g, recipe, p, delta // 2, rng, root, parent, weight)
        roots.append(r)
    top = roots[0]
    for r in roots[1:]:
        parent[r] = top
        weight[r] = delta
    return top


def sample_partial_tree_metric(g: WeightedGraph, h: int, epsilon: float, rng, root=None,
                               constants: Constants = DEFAULT_CONSTANTS) -> WellSeparatedTree:
    """Draw one well-separated partial tree on a random subset of V.

    With ``root`` given, the part holding it is always recursed into first so it
    ends as the tree root; if it is ever excluded the draw is abandoned and
    :class:`_RootLost` is raised internally.
    """
    recipe = tree_recipe(g, h, epsilon, constants)
    parent: dict = {}
    weight: dict = {}
    if g.n == 1:
        return WellSeparatedTree(0, {}, {})
    top = _build(g, recipe, frozenset(range(g.n)), recipe.delta0, rng, root, parent, weight)
    return WellSeparatedTree(top, parent, weight)


@dataclass(frozen=True, eq=False)
class PartialTreeEmbedding:
    """A partial tree plus one witness walk in G per tree edge.

    ``witness[c]`` runs from child ``c`` to its parent.  ``alpha_wc`` and ``beta``
    are the declared stretches relative to ``d^(hop_bound)``.
    """

    tree: RootedTree
    graph: WeightedGraph
    witness: dict
    hop_bound: int
    edge_hops: int
    alpha_wc: float
    beta: float
    recipe: TreeRecipe | None = None
    _memo: dict = field(default_factory=dict, repr=False)

    @property
    def vertices(self) -> list:
        return self.tree.nodes

    @property
    def root(self):
        return self.tree.root

    def witness_between(self, a, b) -> HopPath:
        c = self.tree.child_of(a, b)
        w = self.witness[c]
        return w if c == a else w.reversed()

    def graph_path(self, u, v) -> HopPath:
        """Concatenated witnesses along the tree path from ``u`` to ``v``."""
        vs = self.tree.path_vertices(u, v)
        path = HopPath((u,), 0)
        for a, b in zip(vs, vs[1:]):
            path = path.concat(self.witness_between(a, b))
        return path

    def distance_matrix(self):
        if "dist" not in self._memo:
            self._memo["dist"] = self.tree.distance_matrix()
        return self._memo["dist"]

    def hop_matrix(self):
        """Hop counts of the concatenated witness walks for all pairs."""
        if "hops" not in self._memo:
            self._memo["hops"] = self.tree.distance_matrix(
                {c: w.hops for c, w in self.witness.items()}
            )
        return self._memo["hops"]

    def to_json(self) -> dict:
        t = self.tree
        return {
            "schema": 1,
            "root": t.root,
            "nodes": t.nodes,
            "edges": [
                {"u": c, "v": p, "w": w, "witness": list(self.witness[c].vertices)}
                for c, p, w in t.edges()
            ],
            "hop_bound": self.hop_bound,
            "edge_hops": self.edge_hops,
            "alpha_wc": self.alpha_wc,
            "beta": self.beta,
        }


def complete_to_embedding(tree: RootedTree, g: WeightedGraph, h: int, beta, alpha_wc=math.inf,
                          declared_beta=None, recipe=None) -> PartialTreeEmbedding:
    """Attach the lightest ``floor(beta*h)``-hop walk to every tree edge.

    Raises :class:`WitnessTooHeavyError` when that walk is heavier than the edge.
    """
    bh = max(1, math.floor(beta * h))
    witness = {}
    for c, p, w in tree.edges():
        path = hop_shortest_path(g, c, p, bh)
        if path is None or path.length > w:
            raise WitnessTooHeavyError((c, p), math.inf if path is None else path.length, w)
        witness[c] = path
    if declared_beta is None:
        declared_beta = beta * max(tree.hop_diameter(), 1)
    return PartialTreeEmbedding(tree, g, witness, int(h), bh, alpha_wc, declared_beta, recipe)


def sample_partial_tree_embedding(g: WeightedGraph, h: int, epsilon: float, root: int, rng,
                                  constants: Constants = DEFAULT_CONSTANTS) -> PartialTreeEmbedding:
    if not 0 <= root < g.n:
        raise InvalidParameterError(f"root {root} is not a vertex")
    recipe = tree_recipe(g, h, epsilon, constants)
    for _ in range(constants.resample_budget):
        try:
            tree = sample_partial_tree_metric(g, h, epsilon, rng, root=root, constants=constants)
        except _RootLost:
            continue
        if tree.root == root:
            return embed_with_recipe(tree, g, recipe)
    raise SamplingFailureError(
        f"root {root} excluded in {constants.resample_budget} consecutive draws"
    )


def embed_with_recipe(tree, g, recipe: TreeRecipe) -> PartialTreeEmbedding:
    return complete_to_embedding(
        tree, g, recipe.h, recipe.edge_hops / recipe.h, alpha_wc=recipe.alpha_wc,
        declared_beta=recipe.beta, recipe=recipe,
    )


def sample_embedding(g, h, epsilon, rng, constants=DEFAULT_CONSTANTS) -> PartialTreeEmbedding:
    """Unrooted sample (no root forcing) completed into an embedding."""
    recipe = tree_recipe(g, h, epsilon, constants)
    return embed_with_recipe(sample_partial_tree_metric(g, h, epsilon, rng, constants=constants), g, recipe)


@dataclass
class StretchReport:
    samples: int
    exclusion_frequency: list
    worst_case_stretch: float
    expected_stretch: float
    mean_expected_stretch: float
    mean_conditional_stretch: float
    max_witness_hop_ratio: float
    sandwich_violations: int
    alpha_wc: float
    beta: float

    def to_json(self) -> dict:
        return {"schema": 1, **{k: getattr(self, k) for k in self.__dataclass_fields__}}


def measure_stretch(g: WeightedGraph, h: int, epsilon: float, samples: int, rng,
                    constants: Constants = DEFAULT_CONSTANTS) -> StretchReport:
    """Sample ``samples`` unrooted embeddings and summarise their stretch.

    ``worst_case_stretch`` is the largest ``d_T/d^(h)`` seen.  ``expected_stretch``
    is the largest per-pair ratio of the empirical ``d_D`` (tree distance times
    the indicator that both ends survive, averaged over draws) to ``d^(h)``, and
    ``mean_expected_stretch`` the same ratio averaged over pairs.
    """
    if samples < 1:
        raise InvalidParameterError("samples must be >= 1")
    recipe = tree_recipe(g, h, epsilon, constants)
    n = g.n
    dh = hop_distances(g, h).astype(float)
    dlo = hop_distances(g, recipe.edge_hops)
    present = np.zeros(n)
    d_sum = np.zeros((n, n))
    both = np.zeros((n, n))
    worst = 0.0
    hop_ratio = 0.0
    violations = 0
    off = ~np.eye(n, dtype=bool)
    for _ in range(samples):
        emb = sample_embedding(g, h, epsilon, rng, constants)
        nodes, dt = emb.distance_matrix()
        if not nodes:
            continue
        ix = np.array(nodes)
        present[ix] += 1
        sub = np.ix_(ix, ix)
        d_sum[sub] += dt
        both[sub] += 1
        mask = off[sub]
        if mask.any():
            worst = max(worst, float((dt[mask] / dh[sub][mask]).max()))
            _, hops = emb.hop_matrix()
            hop_ratio = max(hop_ratio, float(hops.max()) / h)
            violations += int(np.sum((dlo[sub] > dt) & mask))
            violations += int(np.sum((dt > recipe.alpha_wc * dh[sub]) & mask))
    with np.errstate(invalid="ignore", divide="ignore"):
        expected = (d_sum / samples) / dh
        conditional = np.where(both > 0, d_sum / np.maximum(both, 1), np.nan) / dh
    pairs = off & np.isfinite(expected)
    exp_vals = expected[pairs]
    cond_vals = conditional[pairs & (both > 0)]
    return StretchReport(
        samples=samples,
        exclusion_frequency=(1 - present / samples).tolist(),
        worst_case_stretch=worst,
        expected_stretch=float(exp_vals.max()) if exp_vals.size else 0.0,
        mean_expected_stretch=float(exp_vals.mean()) if exp_vals.size else 0.0,
        mean_conditional_stretch=float(cond_vals.mean()) if cond_vals.size else 0.0,
        max_witness_hop_ratio=hop_ratio,
        sandwich_violations=violations,
        alpha_wc=recipe.alpha_wc,
        beta=recipe.beta,
    )
