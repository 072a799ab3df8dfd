"""Command-line entry point: ``bpp <subcommand> ...``.

Exit codes: 0 success, 1 a check or verification failed, 2 bad usage or
input the library rejects.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from . import core
from .core import BoxDims, BppError
from .enumeration import (
    DEFAULT_ENUM_CAP,
    DEFAULT_STATE_BUDGET,
    ExactMoments,
    enumerate_bpps,
    exact_moments_bruteforce,
    exact_moments_dp,
    sum_distribution,
)
from .formulas import InternalError, covariance_matrix, macmahon_count, mean_vector
from .genfunc import q_macmahon, stanley_check, stanley_coefficients
from .qpoly import NonzeroRemainder
from .render import render_svg
from .sample import cftp_arrays, cftp_sample, derive_seeds, mcmc_chain, parse_seed
from .stats import DEFAULT_MCMC_SWEEPS, compare_to_formula, monte_carlo_moments
from .verify import format_table, run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _dims(text: str) -> BoxDims:
    try:
        return BoxDims.parse(text)
    except (ValueError, TypeError) as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _seed(text: str) -> int:
    try:
        return parse_seed(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _grid(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be amax,bmax,cmax")
    return tuple(int(p) for p in parts)


def _emit_partition(p, fmt: str) -> str:
    return core.format_json(p) if fmt == "json" else core.format_text(p)


def _formula_moments(dims: BoxDims) -> ExactMoments:
    cov = covariance_matrix(dims)
    return ExactMoments(dims, macmahon_count(dims), tuple(mean_vector(dims)),
                        tuple(tuple(row) for row in cov))


# -- subcommands -------------------------------------------------------------

def cmd_sample(args) -> int:
    if args.method == "cftp":
        p = cftp_sample(args.dims, args.seed)
    else:
        p = mcmc_chain(args.dims, args.seed, args.sweeps, args.start)
    sys.stdout.write(_emit_partition(p, args.format))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.count_only:
        print(macmahon_count(args.dims))
        return EXIT_OK
    for p in enumerate_bpps(args.dims, args.cap):
        sys.stdout.write(core.format_json(p) if args.format == "json" else core.format_text(p) + "\n")
    return EXIT_OK


def cmd_moments(args) -> int:
    dims = args.dims
    if args.method == "mc":
        est = monte_carlo_moments(dims, args.n, args.seed, args.sampler, args.sweeps)
        report = compare_to_formula(est, args.threshold)
        print(report.dumps())
        return EXIT_OK if report.passed else EXIT_FAIL
    if args.method == "formula":
        m = _formula_moments(dims)
    elif args.method == "enumerate":
        m = exact_moments_bruteforce(dims, args.cap)
    else:
        m = exact_moments_dp(dims, args.budget)
    out = m.to_dict()
    out["method"] = args.method
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_gf(args) -> int:
    poly = q_macmahon(args.dims)
    print(json.dumps(poly.to_json()) if args.format == "json" else str(poly))
    if args.check:
        ok = poly == sum_distribution(args.dims, args.budget)
        print(f"check: q-MacMahon {'equals' if ok else 'DIFFERS FROM'} the DP histogram",
              file=sys.stderr)
        return EXIT_OK if ok else EXIT_FAIL
    return EXIT_OK


def cmd_stanley(args) -> int:
    table = stanley_coefficients(args.a, args.b, args.max_degree)
    out = {"a": args.a, "b": args.b, "max_degree": args.max_degree, "coefficients": table.to_json()}
    ok = True
    if args.check:
        ok = stanley_check(args.a, args.b, args.max_degree, args.cap)
        out["check"] = ok
    print(json.dumps(out, indent=2))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_render(args) -> int:
    text = Path(args.input).read_text()
    p = core.parse_json(text) if text.lstrip().startswith("{") else core.parse_text(text)
    svg = render_svg(p, args.cell_size, show_numbers=not args.no_numbers,
                     show_contours=not args.no_contours, show_sums=not args.no_sums)
    if args.out == "-":
        sys.stdout.write(svg)
    else:
        Path(args.out).write_text(svg, encoding="utf-8")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_checks(*args.grid, enum_cap=args.cap, state_budget=args.budget)
    print(format_table(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_bench(args) -> int:
    seeds = derive_seeds(args.seed, args.n)
    t0 = time.perf_counter()
    _, times = cftp_arrays(args.dims, seeds, return_times=True)
    elapsed = time.perf_counter() - t0
    # ticks per sample: two chains over epochs 1, 2, ..., T
    ticks = int((2 * (2 * times - 1)).sum())
    hist = {str(int(t)): int(n) for t, n in zip(*np.unique(times, return_counts=True))}
    out = {
        "dims": {"a": args.dims.a, "b": args.dims.b, "c": args.dims.c},
        "n": args.n,
        "seed": args.seed,
        "coalescence_T": {
            "min": int(times.min()),
            "median": float(statistics.median(times.tolist())),
            "mean": float(times.mean()),
            "max": int(times.max()),
            "histogram": hist,
        },
        "seconds": elapsed,
        "samples_per_second": args.n / elapsed if elapsed > 0 else None,
        "updates_per_second": ticks / elapsed if elapsed > 0 else None,
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bpp", description="Diagonal sums of uniformly random boxed plane partitions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def dims_arg(p):
        p.add_argument("--dims", type=_dims, required=True, metavar="A,B,C")

    p = sub.add_parser("sample", help="draw one partition")
    dims_arg(p)
    p.add_argument("--seed", type=_seed, required=True, help="decimal or 0x hex")
    p.add_argument("--method", choices=("cftp", "mcmc"), default="cftp")
    p.add_argument("--sweeps", type=int, default=DEFAULT_MCMC_SWEEPS)
    p.add_argument("--start", choices=("bottom", "top"), default="bottom")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("enumerate", help="list every partition in the box")
    dims_arg(p)
    p.add_argument("--format", choices=("text", "json"), default="json")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("moments", help="means and covariances of the diagonal sums")
    dims_arg(p)
    p.add_argument("--method", choices=("formula", "enumerate", "dp", "mc"), default="formula")
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--sampler", choices=("cftp", "mcmc"), default="cftp")
    p.add_argument("--sweeps", type=int, default=DEFAULT_MCMC_SWEEPS)
    p.add_argument("--threshold", type=float, default=4.0)
    p.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP)
    p.add_argument("--budget", type=int, default=DEFAULT_STATE_BUDGET)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("gf", help="q-MacMahon generating function of the total sum")
    dims_arg(p)
    p.add_argument("--check", action="store_true", help="compare with the DP histogram")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--budget", type=int, default=DEFAULT_STATE_BUDGET)
    p.set_defaults(func=cmd_gf)

    p = sub.add_parser("stanley", help="truncated multivariate generating function")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--check", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP)
    p.set_defaults(func=cmd_stanley)

    p = sub.add_parser("render", help="draw a partition as SVG")
    p.add_argument("--in", dest="input", required=True, help="partition file (JSON or text)")
    p.add_argument("--out", required=True, help="output path, or - for stdout")
    p.add_argument("--cell-size", type=float, default=24.0)
    p.add_argument("--no-contours", action="store_true")
    p.add_argument("--no-sums", action="store_true")
    p.add_argument("--no-numbers", action="store_true")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="run the exact cross-check suite")
    p.add_argument("--grid", type=_grid, default=(3, 3, 3), metavar="AMAX,BMAX,CMAX")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP)
    p.add_argument("--budget", type=int, default=DEFAULT_STATE_BUDGET)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="CFTP coalescence times and throughput")
    dims_arg(p)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (NonzeroRemainder, InternalError) as e:
        print(f"bpp {args.command}: internal check failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    except (BppError, ValueError, OSError) as e:
        print(f"bpp {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
