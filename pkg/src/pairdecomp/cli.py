"""Command line entry point: ``pairdecomp run`` and ``pairdecomp validate``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import DistanceOracle, validate
from .datasets import FAMILIES, DatasetSpec, generate
from .exact_oracle import DEFAULT_NODE_LIMIT
from .experiment import ALGORITHMS, ValidationError, run_experiment
from .io import read_decomposition, read_matrix, read_points
from .one_dim import snap_to_grid, squares_to_rectangles
from .one_dim.lifting import SquareCover
from .render import render_svg

__all__ = ["main", "build_parser"]


def _int_list(text: str):
    return [int(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pairdecomp", description="Pair decompositions and their experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="build decompositions and print a table")
    run.add_argument("--dataset", required=True, choices=FAMILIES)
    run.add_argument("--n", required=True, type=_int_list, help="point count(s), comma separated")
    run.add_argument("--eps", default="1", help="decimal; exact rational for 1D algorithms")
    run.add_argument("--algo", default="greedy,ck-wspd,aprx3,aprx3c,exact",
                     help=f"comma separated subset of {','.join(ALGORITHMS)}")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--dims", type=int, default=2, help="dimension for euclid-random")
    run.add_argument("--points", help="point file for --dataset file")
    run.add_argument("--budget", type=int, default=DEFAULT_NODE_LIMIT, help="exact search node limit")
    run.add_argument("--out", default="csv", choices=("csv", "md", "json", "svg"))
    run.add_argument("--outfile", help="write here instead of stdout")

    val = sub.add_parser("validate", help="check a decomposition JSON file")
    src = val.add_mutually_exclusive_group(required=True)
    src.add_argument("--points", help="point file")
    src.add_argument("--matrix", help="row-major distance matrix file")
    val.add_argument("--decomp", required=True)
    val.add_argument("--kind", choices=("wspd", "sspd", "abc"))
    val.add_argument("--eps")
    return ap


def _svg(table, P):
    row = table.rows[0]
    for name in ("partition", "exact", "aprx3c", "greedy", "aprx3"):
        if name not in row.results:
            continue
        obj = row.results[name]
        if name == "partition":
            src = next((row.results[a] for a in ("exact", "aprx3c", "greedy", "aprx3") if a in row.results), None)
            if src is None:
                continue
            return render_svg(P, squares_to_rectangles(snap_to_grid(P, src)))
        if isinstance(obj, SquareCover):
            return render_svg(P, obj)
    return render_svg(P, None)


def _run(args) -> int:
    algos = [a.strip() for a in args.algo.split(",") if a.strip()]
    specs = [DatasetSpec(args.dataset, n, args.seed, args.dims, args.points) for n in args.n]
    table = run_experiment(specs, args.eps, algos, budget=args.budget)
    if args.out == "svg":
        text = _svg(table, generate(sorted(specs, key=lambda s: s.n)[0]))
    else:
        text = table.render(args.out)
    if args.outfile:
        Path(args.outfile).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _validate(args) -> int:
    W = read_decomposition(args.decomp)
    if args.points:
        P = read_points(args.points)
        oracle = DistanceOracle.from_points(P)
    else:
        P = None
        oracle = DistanceOracle.from_matrix(read_matrix(args.matrix))
    rep = validate(P, W, oracle=oracle, eps=args.eps, kind=args.kind)
    print(f"pairs {rep.size}  weight {rep.weight}")
    print(f"worst separation ratio {rep.worst_separation:.6g}  worst stability {rep.worst_stability:.6g}")
    print(f"coverage {'ok' if rep.coverage_ok else 'FAILED'}  histogram {rep.multiplicity_histogram}")
    print(f"separation {'ok' if rep.separation_ok else 'FAILED'}")
    for k, pair in rep.violations:
        print(f"  pair {k}: {list(pair.a)} | {list(pair.b)}")
    print("VALID" if rep.ok else "INVALID")
    return 0 if rep.ok else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run(args)
        return _validate(args)
    except (ValueError, ValidationError, OSError) as exc:
        print(f"pairdecomp: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
