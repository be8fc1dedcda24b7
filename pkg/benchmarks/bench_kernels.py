"""Time the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py --repeats 5 --out benchmarks/results.csv

Every row also records whether the two backends returned identical arrays.
"""

import argparse
import sys

from hopcore.bench import KERNELS, run_kernel_bench, to_csv
from hopcore.kernels import numba_backend


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kernels", default=",".join(KERNELS), help="comma-separated subset of " + ", ".join(KERNELS))
    ap.add_argument("--sizes", default=None, help="comma-separated sizes (matrix side, or bit count for subset_merge)")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--workers", type=int, default=1, help="processes; >1 runs jobs in parallel")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None, help="CSV path (default stdout)")
    args = ap.parse_args(argv)

    if numba_backend is None:
        print("numba is not importable; only the numpy backend is timed", file=sys.stderr)
    names = tuple(k.strip() for k in args.kernels.split(",") if k.strip())
    unknown = set(names) - set(KERNELS)
    if unknown:
        ap.error(f"unknown kernels: {sorted(unknown)}")
    sizes = [int(s) for s in args.sizes.split(",")] if args.sizes else None
    rows = run_kernel_bench(names, sizes, args.repeats, args.workers, args.seed)
    text = to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    mismatched = [r for r in rows if not r["agrees"]]
    return 1 if mismatched else 0


if __name__ == "__main__":
    sys.exit(main())
