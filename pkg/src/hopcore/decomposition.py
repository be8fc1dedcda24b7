"""Mixture metrics, padded decompositions and hop-constrained decompositions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import InvalidMetricError, InvalidParameterError
from .graph import WeightedGraph
from .kernels import INF


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(float(x))


@dataclass(frozen=True, eq=False)
class MixtureMetric:
    """Edge weights ``1/h + w(e)/b`` kept exactly.

    With ``h = p/q`` and ``b = r/s`` every edge weight equals
    ``numerators[u, v] / denominator`` where ``numerators = q*r + w*s*p`` and
    ``denominator = p*r``.  Shortest paths are then plain integer sums.
    """

    base: WeightedGraph
    hop_scale: Fraction
    weight_scale: Fraction
    numerators: np.ndarray
    denominator: int

    def weight(self, u: int, v: int) -> Fraction:
        return Fraction(int(self.numerators[u, v]), self.denominator)

    def integer_distances(self) -> np.ndarray:
        """Shortest-path numerators; divide by ``denominator`` for ``d'``."""
        key = ("mixfw", self.hop_scale, self.weight_scale)
        cache = self.base._cache
        if key not in cache:
            d = kernels.floyd_warshall(self.numerators)
            d.setflags(write=False)
            cache[key] = d
        return cache[key]

    def distance(self, u: int, v: int) -> Fraction:
        return Fraction(int(self.integer_distances()[u, v]), self.denominator)


def mixture_weights(g: WeightedGraph, h, b) -> MixtureMetric:
    hf, bf = as_fraction(h), as_fraction(b)
    if hf <= 0 or bf <= 0:
        raise InvalidParameterError("hop scale and weight scale must be positive")
    p, q = hf.numerator, hf.denominator
    r, s = bf.numerator, bf.denominator
    w = g.weights
    finite = w < INF
    top = int(w[finite].max()) if finite.any() else 0
    if (q * r + top * s * p) * max(g.n, 1) >= int(INF):
        raise InvalidParameterError("mixture weights overflow 64-bit integers; use coarser scales")
    num = np.where(finite, q * r + w * (s * p), INF).astype(np.int64)
    np.fill_diagonal(num, 0)
    num.setflags(write=False)
    return MixtureMetric(g, hf, bf, num, p * r)


@dataclass(frozen=True)
class PartialVertexPartition:
    parts: tuple
    excluded: frozenset

    def __post_init__(self):
        seen: set = set()
        for part in self.parts:
            if not part:
                raise InvalidParameterError("empty part")
            if seen & set(part):
                raise InvalidParameterError("parts overlap")
            seen |= set(part)
        if seen & self.excluded:
            raise InvalidParameterError("excluded vertex also in a part")

    def part_of(self) -> dict[int, int]:
        return {v: i for i, part in enumerate(self.parts) for v in part}

    def to_json(self) -> dict:
        return {"parts": [sorted(p) for p in self.parts], "excluded": sorted(self.excluded)}


@dataclass(frozen=True)
class DecompositionParams:
    """``rho_pad = pad_constant * ln n``; ``delta`` overrides the diameter ``2 rho_pad``."""

    pad_constant: float = 2.0
    gamma: float | None = None
    delta: float | None = None

    def __post_init__(self):
        if self.pad_constant <= 0:
            raise InvalidParameterError("pad_constant must be positive")
        if self.gamma is not None and not 0 < self.gamma < 1:
            raise InvalidParameterError("gamma must lie in (0, 1)")
        if self.delta is not None and self.delta <= 0:
            raise InvalidParameterError("delta must be positive")

    def rho(self, n: int) -> float:
        return self.pad_constant * math.log(max(n, 2))


def check_metric(dist: np.ndarray) -> None:
    d = np.asarray(dist)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise InvalidMetricError("distance matrix must be square")
    if not np.array_equal(d, d.T) or np.any(np.diag(d) != 0) or np.any(d < 0):
        raise InvalidMetricError("distances must be symmetric, non-negative, zero on the diagonal")
    m = d.shape[0]
    for k in range(m):
        via = d[:, k : k + 1] + d[k : k + 1, :]
        bad = np.argwhere(d > via)
        if bad.size:
            i, j = bad[0]
            raise InvalidMetricError(
                f"triangle inequality fails: d({i},{j}) > d({i},{k}) + d({k},{j})"
            )


def padded_decomposition(dist, delta, rng, validate: bool = True) -> list[list[int]]:
    """Ball carving with truncated exponential radii.

    ``dist`` is an ``m x m`` metric over points ``0..m-1``.  Centers are taken in a
    random order; each draws ``r = min(Exp(rate=2 ln m / delta), delta/2)`` and
    claims all still-unassigned points within ``r``.  Every part therefore has
    diameter at most ``delta``.
    """
    d = np.asarray(dist)
    m = d.shape[0]
    if delta <= 0:
        raise InvalidParameterError("delta must be positive")
    if validate:
        check_metric(d)
    if m == 1:
        return [[0]]
    rate = 2.0 * math.log(m) / float(delta)
    order = rng.permutation(m)
    radii = np.minimum(rng.exponential(1.0 / rate, size=m), float(delta) / 2.0)
    owner = np.full(m, -1, dtype=np.int64)
    for c, r in zip(order, radii):
        claim = (owner < 0) & (d[c] <= r)
        owner[claim] = c
    parts: dict[int, list[int]] = {}
    for x in range(m):
        parts.setdefault(int(owner[x]), []).append(x)
    return sorted(parts.values(), key=lambda p: p[0])


def hop_constrained_decomposition(g: WeightedGraph, h, b, gamma, rng, params=None,
                                  vertices=None) -> PartialVertexPartition:
    """Partition ``vertices`` (default all of V) into low hop-diameter parts.

    Builds the mixture metric for scales ``(h, b)``, carves a padded decomposition
    of diameter ``Delta = 2 rho_pad`` in the scaled metric ``Delta * d'`` and drops
    every vertex whose scaled ball of radius ``2 gamma`` is split.  Distances are
    taken in the whole graph; balls only look at points of ``vertices``.
    """
    params = params or DecompositionParams()
    if not 0 < gamma < 1:
        raise InvalidParameterError("gamma must lie in (0, 1)")
    verts = np.array(sorted(range(g.n) if vertices is None else set(vertices)), dtype=np.int64)
    if verts.size == 0:
        return PartialVertexPartition((), frozenset())
    metric = mixture_weights(g, h, b)
    if verts.size == 1:
        return PartialVertexPartition((frozenset(verts.tolist()),), frozenset())
    nd = metric.integer_distances()[np.ix_(verts, verts)]
    den = metric.denominator
    delta = params.delta if params.delta is not None else 2.0 * params.rho(g.n)
    # scaled distance Delta*N/den <= Delta  <=>  N <= den
    carved = padded_decomposition(nd, den, rng, validate=False)
    part_id = np.empty(verts.size, dtype=np.int64)
    for i, part in enumerate(carved):
        part_id[part] = i
    # scaled distance <= 2 gamma  <=>  N <= 2 gamma den / Delta
    thr = math.floor(2 * as_fraction(gamma) * den / as_fraction(delta))
    close = nd <= thr
    broken = np.any(close & (part_id[None, :] != part_id[:, None]), axis=1)
    parts = []
    for i, part in enumerate(carved):
        keep = [int(verts[x]) for x in part if not broken[x]]
        if keep:
            parts.append(frozenset(keep))
    excluded = frozenset(int(v) for v in verts[broken])
    return PartialVertexPartition(tuple(parts), excluded)
