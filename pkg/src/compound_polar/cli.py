"""Command line front end.

Exit codes: 0 success, 2 usage error, 1 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import sys

import numpy as np

from . import formats
from .bms import capacity, bhattacharyya, entropy, format_density, parse_channel_spec
from .bounds import CONSTRUCTION_GRID, bound_table, set_bounds
from .codec import build_compound_code, simulate
from .density import DEFAULT_GRID, EXACT, GRIDS, QuantizerMode
from .trees import evaluate_all, evaluate_tree_channel, parse_sigma
from .universal import DEFAULT_KKT_GRID, KktError, universal_report

DEFAULT_P = "bsc:0.11002"
DEFAULT_Q = "bec:0.5"


class UsageError(Exception):
    pass


def _spec(text):
    try:
        return parse_channel_spec(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _grid_size(text):
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("grid size must be at least 2")
    return v


def _sigma(text):
    try:
        return parse_sigma(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    ap = argparse.ArgumentParser(
        prog="compound-polar",
        description="Compound-rate bounds for polar codes under SC decoding.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    def quant(p, default="degrade"):
        p.add_argument("--quantizer", choices=("exact", "degrade", "upgrade"), default=default)
        p.add_argument("--grid", type=_grid_size, default=DEFAULT_GRID)
        p.add_argument("--grid-kind", choices=GRIDS, default="bhattacharyya")

    def pair(p):
        p.add_argument("--p", type=_spec, default=_spec(DEFAULT_P))
        p.add_argument("--q", type=_spec, default=_spec(DEFAULT_Q))

    p = sub.add_parser("functionals", help="capacity, entropy and Bhattacharyya parameter")
    p.add_argument("--channel", type=_spec, required=True)
    fmt(p)

    p = sub.add_parser("evolve", help="density of a single tree channel")
    p.add_argument("--channel", type=_spec, required=True)
    p.add_argument("--sigma", type=_sigma, required=True)
    quant(p)
    fmt(p)

    p = sub.add_parser("profile", help="all 2^n tree channels")
    p.add_argument("--channel", type=_spec, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    quant(p)
    fmt(p)

    p = sub.add_parser("bounds", help="compound bounds at one height")
    pair(p)
    p.add_argument("--channel", type=_spec, action="append", default=[],
                   help="additional channels in the compound set")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--grid", type=_grid_size, default=DEFAULT_GRID)
    p.add_argument("--grid-kind", choices=GRIDS, default="bhattacharyya")
    fmt(p)

    p = sub.add_parser("table", help="compound bounds for heights 0..nmax")
    pair(p)
    p.add_argument("--nmax", type=_positive_int, required=True)
    p.add_argument("--grid", type=_grid_size, default=DEFAULT_GRID)
    p.add_argument("--grid-kind", choices=GRIDS, default="bhattacharyya")
    fmt(p)

    p = sub.add_parser("universal", help="improved lower bound over BMS(I)")
    p.add_argument("--capacity", type=float, required=True)
    p.add_argument("--grid", type=_grid_size, default=DEFAULT_KKT_GRID)
    fmt(p)

    p = sub.add_parser("construct", help="information set good for both channels")
    pair(p)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--pb", type=float, required=True)
    p.add_argument("--grid", type=_grid_size, default=CONSTRUCTION_GRID)

    p = sub.add_parser("simulate", help="Monte Carlo block error rate")
    p.add_argument("--channel", type=_spec, action="append", default=[])
    p.add_argument("--code", help="JSON file written by 'construct'")
    pair(p)
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--pb", type=float)
    p.add_argument("--grid", type=_grid_size, default=CONSTRUCTION_GRID)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    fmt(p)
    return ap


def _mode(args):
    if args.quantizer == "exact":
        return EXACT
    return QuantizerMode(args.quantizer, args.grid, args.grid_kind)


def _emit(args, out, csv_text, json_text):
    out.write(json_text if args.format == "json" else csv_text)


def run_functionals(args, out):
    a = args.channel.density()
    row = {"channel": str(args.channel), "capacity": capacity(a),
           "entropy": entropy(a), "bhattacharyya": bhattacharyya(a)}
    _emit(args, out, formats.records_csv(list(row), [list(row.values())]), formats.records_json(row))


def run_evolve(args, out):
    d = evaluate_tree_channel(args.channel.density(), args.sigma, _mode(args))
    sig = "".join(map(str, args.sigma))
    row = {"sigma": sig, "capacity": capacity(d), "bhattacharyya": bhattacharyya(d),
           "density": format_density(d)}
    _emit(args, out, formats.records_csv(list(row), [list(row.values())]), formats.records_json(row))


def run_profile(args, out):
    prof = evaluate_all(args.channel.density(), args.n, _mode(args))
    _emit(args, out, formats.profile_csv(prof), formats.profile_json(prof))


def run_bounds(args, out):
    dens = [s.density() for s in [args.p, args.q, *args.channel]]
    row = set_bounds(dens, args.n, args.grid, args.grid_kind)
    _emit(args, out, formats.bounds_csv([row]), formats.bounds_json([row]))


def run_table(args, out):
    rows = bound_table(args.p.density(), args.q.density(), args.nmax, args.grid, args.grid_kind)
    _emit(args, out, formats.bounds_csv(rows), formats.bounds_json(rows))


def run_universal(args, out):
    if not 0.0 < args.capacity < 1.0:
        raise UsageError("--capacity must lie in (0, 1)")
    if args.grid < 3:
        raise UsageError("--grid must be at least 3")
    rep = universal_report(args.capacity, args.grid)
    d = rep.as_dict()
    _emit(args, out, formats.records_csv(list(d), [list(d.values())]), formats.records_json(d))


def _need_pb(pb):
    if pb is None or not pb > 0:
        raise UsageError("--pb must be positive")


def run_construct(args, out):
    _need_pb(args.pb)
    code = build_compound_code(args.p, args.q, args.n, args.pb, args.grid)
    out.write(formats.code_json(code))


def run_simulate(args, out):
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    if args.code:
        with open(args.code) as fh:
            code = formats.read_code(fh.read())
    else:
        if args.n is None:
            raise UsageError("simulate needs --code or --n/--pb")
        _need_pb(args.pb)
        code = build_compound_code(args.p, args.q, args.n, args.pb, args.grid)
    channels = args.channel or [args.p, args.q]
    reports = [simulate(s, code, args.trials, args.seed) for s in channels]
    _emit(args, out, formats.sim_csv(reports), formats.sim_json(reports))


COMMANDS = {
    "functionals": run_functionals,
    "evolve": run_evolve,
    "profile": run_profile,
    "bounds": run_bounds,
    "table": run_table,
    "universal": run_universal,
    "construct": run_construct,
    "simulate": run_simulate,
}


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(err)
        err.write(f"{parser.prog} {args.command}: error: {exc}\n")
        return 2
    except (KktError, ArithmeticError, np.linalg.LinAlgError, ValueError) as exc:
        err.write(f"{args.command}: numerical failure: {exc}\n")
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
