"""Numba-compiled versions of :mod:`hopcore._numpy_kernels`."""

from __future__ import annotations

import numba
import numpy as np

INF = np.int64(1 << 61)


@numba.njit(cache=True)
def hop_layers(weights, src, h):
    n = weights.shape[0]
    dist = np.full((h + 1, n), INF, dtype=np.int64)
    parent = np.full((h + 1, n), -1, dtype=np.int64)
    dist[0, src] = 0
    for k in range(1, h + 1):
        for v in range(n):
            best = dist[k - 1, v]
            arg = -1
            for u in range(n):
                du = dist[k - 1, u]
                if du >= INF:
                    continue
                c = du + weights[u, v]
                if c < best:
                    best = c
                    arg = u
            dist[k, v] = best if best < INF else INF
            parent[k, v] = arg
    return dist, parent


@numba.njit(cache=True)
def all_pairs_hop(weights, h):
    n = weights.shape[0]
    d = weights.copy()
    for i in range(n):
        d[i, i] = 0
    nd = d.copy()
    for _ in range(h - 1):
        changed = False
        for s in range(n):
            for v in range(n):
                best = d[s, v]
                for u in range(n):
                    a = d[s, u]
                    if a >= INF:
                        continue
                    c = a + weights[u, v]
                    if c < best:
                        best = c
                if best > INF:
                    best = INF
                nd[s, v] = best
                if best != d[s, v]:
                    changed = True
        d, nd = nd, d
        if not changed:
            break
    return d


@numba.njit(cache=True)
def floyd_warshall(weights):
    d = weights.copy()
    n = d.shape[0]
    for i in range(n):
        d[i, i] = 0
    for k in range(n):
        for i in range(n):
            dik = d[i, k]
            if dik >= INF:
                continue
            for j in range(n):
                c = dik + d[k, j]
                if c < d[i, j]:
                    d[i, j] = c
    return d


@numba.njit(cache=True)
def subset_merge(cur, child):
    size = cur.shape[0]
    new = np.full(size, INF, dtype=np.int64)
    choice = np.zeros(size, dtype=np.int64)
    for s in range(size):
        # ascending submask walk so ties keep the smallest A
        best = INF
        arg = 0
        a = 0
        while True:
            c = cur[a] + child[s ^ a]
            if c < best:
                best = c
                arg = a
            if a == s:
                break
            a = (a - s) & s
        new[s] = best
        choice[s] = arg
    return new, choice
