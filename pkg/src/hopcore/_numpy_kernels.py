"""Pure-numpy implementations of the hot loops.

These are the reference versions; the numba module mirrors them loop for loop.
All arrays are int64 and ``INF`` marks a missing edge or unreachable vertex.
"""

from __future__ import annotations

import numpy as np

INF = np.int64(1 << 61)


def hop_layers(weights, src, h):
    """Layered Bellman-Ford from ``src``.

    Returns ``(dist, parent)`` of shape ``(h+1, n)``.  ``parent[k, v]`` is the
    predecessor on a best walk with at most ``k`` hops, or ``-1`` when layer
    ``k`` just carries layer ``k-1`` forward.
    """
    n = weights.shape[0]
    dist = np.full((h + 1, n), INF, dtype=np.int64)
    parent = np.full((h + 1, n), -1, dtype=np.int64)
    dist[0, src] = 0
    for k in range(1, h + 1):
        prev = dist[k - 1]
        cand = np.minimum(prev[:, None] + weights, INF)
        best_u = np.argmin(cand, axis=0)
        best = cand[best_u, np.arange(n)]
        better = best < prev
        dist[k] = np.where(better, best, prev)
        parent[k] = np.where(better, best_u, -1)
    return dist, parent


def all_pairs_hop(weights, h):
    """All-pairs ``d^(h)`` by ``h`` rounds of min-plus products against ``weights``."""
    n = weights.shape[0]
    d = weights.copy()
    np.fill_diagonal(d, 0)
    for _ in range(h - 1):
        nd = np.min(d[:, :, None] + weights[None, :, :], axis=1)
        nd = np.minimum(np.minimum(nd, d), INF)
        if np.array_equal(nd, d):
            break
        d = nd
    return d


def floyd_warshall(weights):
    d = weights.copy()
    np.fill_diagonal(d, 0)
    n = d.shape[0]
    for k in range(n):
        np.minimum(d, np.minimum(d[:, k : k + 1] + d[k : k + 1, :], INF), out=d)
    return d


_PAIR_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _subset_pairs(k):
    # every (S, A) with A a submask of S, sorted by S
    if k not in _PAIR_CACHE:
        size = 1 << k
        s_list, a_list = [], []
        for s in range(size):
            a = s
            subs = []
            while True:
                subs.append(a)
                if a == 0:
                    break
                a = (a - 1) & s
            subs.reverse()
            s_list.extend([s] * len(subs))
            a_list.extend(subs)
        _PAIR_CACHE[k] = (np.array(s_list, dtype=np.int64), np.array(a_list, dtype=np.int64))
    return _PAIR_CACHE[k]


def subset_merge(cur, child):
    """``new[S] = min_{A subset S} cur[A] + child[S \\ A]`` with the arg-min ``A``.

    Ties go to the smallest ``A``.
    """
    size = cur.shape[0]
    k = size.bit_length() - 1
    s_arr, a_arr = _subset_pairs(k)
    vals = np.minimum(cur[a_arr] + child[s_arr ^ a_arr], INF)
    starts = np.searchsorted(s_arr, np.arange(size))
    new = np.minimum.reduceat(vals, starts)
    # first position in each block attaining the block minimum
    hit = vals == new[s_arr]
    idx = np.flatnonzero(hit)
    first = np.searchsorted(idx, starts)
    choice = a_arr[idx[first]]
    return new.astype(np.int64), choice.astype(np.int64)
