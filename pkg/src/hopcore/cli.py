"""Command line entry point: ``hopcore <command> ...``.

Output is JSON (sorted keys) on stdout or in ``--out``.  Exit codes: 0 success,
1 other library error, 2 infeasible instance, 3 coverage or sampling failure,
4 parse or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .config import Constants, load_config_file
from .connectors import build_hop_connector
from .demands import load_demands
from .errors import (
    CoverageFailureError,
    HopcoreError,
    InfeasibleInstanceError,
    ParseError,
    SamplingFailureError,
)
from .graph import load_graph
from .oracle import brute_network_design, brute_optimum
from .partial_tree import measure_stretch, sample_partial_tree_embedding
from .rng import default_seed, stream
from .solvers import (
    min_cost_spanner,
    online_group_steiner,
    online_group_steiner_forest,
    solve_group_steiner_forest,
    solve_group_steiner_merging,
    solve_group_steiner_reptree,
    solve_k_steiner,
    solve_oblivious_network_design,
    solve_oblivious_steiner_forest,
)
from .tree_solvers import LoadCostFunction

SOLVE_KINDS = ("sf", "gst", "gst-rep", "kst", "gsf", "ond", "spanner", "online-gst", "online-gsf")
EXPECTED_DEMANDS = {
    "sf": "pairs", "spanner": "pairs", "ond": "pairs",
    "gst": "groups", "gst-rep": "groups", "online-gst": "groups",
    "gsf": "group-pairs", "online-gsf": "group-pairs",
    "kst": "terminals",
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def rng_for(seed: int, command: str):
    """The generator a CLI command uses; library callers can reproduce runs with it."""
    return stream(seed, f"cli-{command}")


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="root seed (default: $HOPCORE_SEED or 0)")
    p.add_argument("--config", default=None, help="JSON file with seed/hops/epsilon/constants")
    p.add_argument("--paper-constants", action="store_true", help="use the literal analysis constants")
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.add_argument("--hops", type=int, default=None, help="hop bound h")
    p.add_argument("--epsilon", type=float, default=None, help="exclusion probability")
    p.add_argument("--no-complete", action="store_true", help="do not complete missing pairs")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="hopcore", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("embed", parents=[common], help="sample one h-hop partial tree embedding")
    p.add_argument("graph")
    p.add_argument("--root", type=int, default=0)

    p = sub.add_parser("stretch", parents=[common], help="measure stretch over many samples")
    p.add_argument("graph")
    p.add_argument("--samples", type=int, default=100)

    p = sub.add_parser("connector", parents=[common], help="build an h-hop connector")
    p.add_argument("graph")
    p.add_argument("--marked", required=True, help="comma-separated marked vertices")

    for name in ("solve", "oracle"):
        p = sub.add_parser(name, parents=[common],
                           help="run a solver" if name == "solve" else "brute-force optimum (tiny inputs)")
        p.add_argument("kind", choices=SOLVE_KINDS)
        p.add_argument("graph")
        p.add_argument("demands")
        p.add_argument("--root", type=int, default=0)
        p.add_argument("--relaxed", action="store_true", help="kst: only ceil(k/8) terminals")
        p.add_argument("--cost-fn", default="sqrt", help="ond: linear | steiner | sqrt | log")
        if name == "oracle":
            p.add_argument("--hop-budget", type=int, default=None, help="hop bound for OPT (default --hops)")

    p = sub.add_parser("bench", parents=[common], help="time numba against numpy kernels")
    p.add_argument("--sizes", default=None, help="comma-separated sizes")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def _resolve(args):
    file_cfg = load_config_file(args.config) if args.config else {}
    consts = Constants.paper() if args.paper_constants else Constants()
    if "constants" in file_cfg:
        try:
            consts = consts.with_overrides(**file_cfg["constants"])
        except TypeError as exc:
            raise ParseError(f"bad constants in config: {exc}") from None
    seed = args.seed if args.seed is not None else file_cfg.get("seed", default_seed())
    hops = args.hops if args.hops is not None else file_cfg.get("hops", 2)
    eps = args.epsilon if args.epsilon is not None else file_cfg.get("epsilon", 0.1)
    return int(seed), int(hops), float(eps), consts


def _dispatch(args) -> object:
    seed, h, eps, consts = _resolve(args)
    cmd = args.command
    if cmd == "bench":
        from .bench import KERNELS, run_kernel_bench, to_csv

        sizes = [int(s) for s in args.sizes.split(",")] if args.sizes else None
        rows = run_kernel_bench(KERNELS, sizes, args.repeats, args.workers, seed)
        return to_csv(rows) if args.format == "csv" else {"schema": 1, "rows": rows}
    g = load_graph(args.graph, complete=not args.no_complete)
    rng = rng_for(seed, cmd)
    if cmd == "embed":
        emb = sample_partial_tree_embedding(g, h, eps, args.root, rng, consts)
        return {**emb.to_json(), "seed": seed}
    if cmd == "stretch":
        return {**measure_stretch(g, h, eps, args.samples, rng, consts).to_json(), "seed": seed}
    if cmd == "connector":
        try:
            marked = [int(x) for x in args.marked.split(",") if x.strip()]
        except ValueError:
            raise ParseError(f"bad --marked list {args.marked!r}") from None
        return build_hop_connector(g, marked, h).to_json()
    demand = load_demands(args.demands)
    want = EXPECTED_DEMANDS[args.kind]
    if demand.kind != want:
        raise ParseError(f"{args.kind} needs {want} demands, file holds {demand.kind}")
    demand.check_vertices(g.n)
    if cmd == "oracle":
        hb = args.hop_budget or h
        if args.kind == "ond":
            res = brute_network_design(g, hb, demand.payload, LoadCostFunction.named(args.cost_fn))
        else:
            kind = {"online-gst": "gst", "online-gsf": "gsf"}.get(args.kind, args.kind)
            root = args.root if kind in ("gst", "gst-rep", "kst") else None
            res = brute_optimum(g, hb, demand, root=root)
        return {**res.to_json(), "hop_bound": hb, "kind": args.kind}
    out = run_solver(args.kind, g, h, demand, rng, consts, root=args.root, relaxed=args.relaxed,
                     cost_fn=args.cost_fn)
    if isinstance(out, list):
        return {"schema": 1, "kind": args.kind, "seed": seed, "steps": [s.to_json(g, seed) for s in out]}
    return {**out.to_json(g, seed), "kind": args.kind}


def run_solver(kind, g, h, demand, rng, constants, root=0, relaxed=False, cost_fn="sqrt"):
    """Library-level equivalent of ``hopcore solve <kind>``."""
    p = demand.payload
    if kind == "sf":
        return solve_oblivious_steiner_forest(g, h, rng, constants).induced(p)
    if kind == "spanner":
        return min_cost_spanner(p, g, h, rng, constants)
    if kind == "ond":
        f = LoadCostFunction.named(cost_fn)
        return solve_oblivious_network_design(g, h, f, rng, constants).induced_network(p, f)
    if kind == "gst":
        return solve_group_steiner_merging(g, h, root, p, rng, constants)
    if kind == "gst-rep":
        return solve_group_steiner_reptree(g, h, root, p, rng, constants)
    if kind == "kst":
        terms, k = p
        return solve_k_steiner(g, h, root, terms, k, relaxed, rng, constants)
    if kind == "gsf":
        return solve_group_steiner_forest(g, h, p, rng, constants)
    if kind == "online-gst":
        return online_group_steiner(g, h, root, p, rng, constants)
    if kind == "online-gsf":
        return online_group_steiner_forest(g, h, p, rng, constants)
    raise ParseError(f"unknown solver {kind!r}")


def _exit_code(exc) -> int:
    if isinstance(exc, InfeasibleInstanceError):
        return 2
    if isinstance(exc, (CoverageFailureError, SamplingFailureError)):
        return 3
    if isinstance(exc, (ParseError, _UsageError, OSError)):
        return 4
    return 1


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    out_path = None
    try:
        args = parser.parse_args(argv)
        out_path = args.out
        result = _dispatch(args)
        text = result if isinstance(result, str) else json.dumps(result, sort_keys=True, indent=2) + "\n"
        _emit(text, out_path)
        return 0
    except (HopcoreError, _UsageError, OSError) as exc:
        kind = "usage" if isinstance(exc, _UsageError) else "io" if isinstance(exc, OSError) else exc.kind
        err = {"error": {"kind": kind, "detail": str(exc)}}
        _emit(json.dumps(err, sort_keys=True) + "\n", out_path)
        return _exit_code(exc)


def main() -> None:
    sys.exit(run())
