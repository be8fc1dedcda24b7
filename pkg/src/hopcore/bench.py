"""Timing harness comparing the numba and numpy kernel backends."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import kernels
from .rng import stream

KERNELS = ("hop_layers", "all_pairs_hop", "floyd_warshall", "subset_merge")


def _inputs(kernel, size, seed):
    rng = stream(seed, f"bench-{kernel}", size)
    if kernel == "subset_merge":
        k = size
        a = rng.integers(0, 100, size=1 << k).astype(np.int64)
        b = rng.integers(0, 100, size=1 << k).astype(np.int64)
        return (a, b)
    w = rng.integers(1, 50, size=(size, size)).astype(np.int64)
    w = np.minimum(w, w.T)
    np.fill_diagonal(w, 0)
    if kernel == "hop_layers":
        return (w, 0, max(1, size // 4))
    if kernel == "all_pairs_hop":
        return (w, max(2, size // 8))
    return (w,)


def _time(fn, args, repeats):
    fn(*args)  # warm-up (includes JIT compilation for numba)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _job(spec):
    kernel, size, backend, repeats, seed = spec
    mod = kernels.numba_backend if backend == "numba" else kernels.numpy_backend
    args = _inputs(kernel, size, seed)
    out = getattr(mod, kernel)(*args)
    ref = getattr(kernels.numpy_backend, kernel)(*args)
    same = all(np.array_equal(x, y) for x, y in zip(out, ref)) if isinstance(out, tuple) else np.array_equal(out, ref)
    return {
        "kernel": kernel,
        "size": size,
        "backend": backend,
        "seconds": _time(getattr(mod, kernel), args, repeats),
        "agrees": bool(same),
    }


def default_sizes(kernel):
    return (8, 10, 12) if kernel == "subset_merge" else (32, 64, 128)


def run_kernel_bench(kernels_=KERNELS, sizes=None, repeats: int = 3, workers: int = 1, seed: int = 0) -> list[dict]:
    backends = ["numpy"] + (["numba"] if kernels.numba_backend is not None else [])
    specs = [
        (k, s, b, repeats, seed)
        for k in kernels_
        for s in (sizes or default_sizes(k))
        for b in backends
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_job, specs))
    else:
        rows = [_job(s) for s in specs]
    speed = {}
    for r in rows:
        speed.setdefault((r["kernel"], r["size"]), {})[r["backend"]] = r["seconds"]
    for r in rows:
        t = speed[(r["kernel"], r["size"])]
        r["speedup_vs_numpy"] = t["numpy"] / r["seconds"] if r["seconds"] > 0 else None
    return rows


def to_csv(rows) -> str:
    cols = ["kernel", "size", "backend", "seconds", "speedup_vs_numpy", "agrees"]
    lines = [",".join(cols)]
    for r in rows:
        lines.append(",".join(str(r[c]) for c in cols))
    return "\n".join(lines) + "\n"
