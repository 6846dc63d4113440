"""Command line driver: every table is CSV, measures are JSON."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import acceptance, report
from .action import InsufficientOmega, OmegaPrefix, ResourceCapExceeded, evaluate, find_move
from .algebra import DEFAULT_TOLERANCE, GroupMeasure, NonConvergent, TooLarge, convolution_power
from .interval import Mismatch, crosscheck
from .munchhausen import CoeffState, honest_comparison, iterate
from .nested import (
    build_matrix,
    entropy_report,
    induced_measure,
    quotient_occupancy,
    rwidf_simulate_trace,
    substitute_t_identity,
    uniform_mu0,
    walk_distribution,
)
from .universal import GroupSpec, folner_scan, growth_table
from .words import WordError, parse

EXACT_WALK_MAX = 6


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _measure(args, spec=None) -> GroupMeasure:
    if args.measure:
        return GroupMeasure.from_json(Path(args.measure).read_text(), spec or GroupSpec.universal())
    return uniform_mu0()


def _tol(args) -> Fraction:
    return Fraction(args.tol) if args.tol else DEFAULT_TOLERANCE


def cmd_wordproblem(args) -> int:
    spec = GroupSpec.parse(args.group)
    print("trivial" if spec.is_trivial(parse(args.word)) else "nontrivial")
    return 0


def cmd_witness(args) -> int:
    w = parse(args.word)
    spec = GroupSpec.parse(args.group)
    move = find_move(w, spec.omega)
    if move is None:
        print("trivial: no witness")
        return 0
    om = spec.omega if spec.omega is not None else OmegaPrefix(move.omega_prefix().prefix, (0, 1, 2))
    v = move.vertex + "0"
    image = evaluate(w, om, v)
    if image == v:
        print(f"witness failed to move {v}", file=sys.stderr)
        return 1
    prefix = "".join(map(str, move.omega_prefix().prefix))
    print(f"omega_prefix={prefix or '-'} vertex={v} image={image}")
    return 0


def cmd_growth(args) -> int:
    spec = GroupSpec.parse(args.group)
    _emit(report.growth_csv(growth_table(spec, args.radius), args.group), args.out)
    return 0


def cmd_folner(args) -> int:
    spec = GroupSpec.parse(args.group)
    _emit(report.folner_csv(folner_scan(spec, args.radius), args.group), args.out)
    return 0


def _matrix(args):
    M = build_matrix(_measure(args))
    return M if args.no_substitute else substitute_t_identity(M)


def cmd_induce(args) -> int:
    M = _matrix(args)
    exact = induced_measure(M, args.x, "exact")
    trunc = induced_measure(M, args.x, "truncated", _tol(args), args.renormalize)
    trace = rwidf_simulate_trace(M, args.x, args.blocks, args.seed, args.jobs) if args.blocks else None
    _emit(report.induce_csv(exact, trunc, trace), args.out)
    if args.json:
        Path(args.json).write_text(exact.to_json())
    return 0


def cmd_iterate(args) -> int:
    s0 = CoeffState.parse(args.start)
    if args.compare:
        text = report.comparison_csv(honest_comparison(s0, args.steps))
    else:
        text = report.iterate_csv(iterate(s0, args.steps, exact=not args.closed_form))
    _emit(text, args.out)
    return 0


def cmd_entropy_report(args) -> int:
    rows = entropy_report(_measure(args), x=args.x, kmax=args.kmax, substitute=not args.no_substitute)
    _emit(report.entropy_csv(rows), args.out)
    return 0


def cmd_simulate(args) -> int:
    mu = _measure(args)
    if args.kind == "walk":
        counts = walk_distribution(mu, args.steps, args.paths, args.seed, args.jobs)
        exact = convolution_power(mu, args.steps) if args.steps <= EXACT_WALK_MAX else None
        text = report.walk_csv(counts, args.paths, exact)
    elif args.kind == "trace":
        M = _matrix(args)
        text = report.trace_csv(rwidf_simulate_trace(M, args.x, args.paths, args.seed, args.jobs), induced_measure(M, args.x))
    else:
        occ = quotient_occupancy(build_matrix(mu), args.steps, args.seed)
        text = "# fraction of steps spent in each internal state\nstate,occupancy\n"
        text += "".join(f"{i},{o:.12g}\n" for i, o in enumerate(occ))
    _emit(text, args.out)
    return 0


def cmd_interval_check(args) -> int:
    import random

    rng = random.Random(args.seed)
    points = None
    if args.samples:
        points = ["".join(rng.choice("01") for _ in range(args.depth)) for _ in range(args.samples)]
    try:
        rho = crosscheck(args.group, args.depth, points)
    except Mismatch as exc:
        print(f"mismatch: {exc}", file=sys.stderr)
        return 1
    print(",".join(f"{k}->{v}" for k, v in rho.items()))
    return 0


def cmd_selftest(args) -> int:
    only = {int(x) for x in args.only.split(",")} if args.only else None
    results = acceptance.run_all(only)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed" + (f"; failed: {failed}" if failed else ""))
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed for every random stream")
    common.add_argument("--jobs", type=int, default=1, help="worker processes; results do not depend on it")
    common.add_argument("--out", help="write the table here instead of stdout")
    common.add_argument("--tol", help="truncation tolerance, e.g. 1e-12 or 1/1000")
    common.add_argument("--renormalize", action="store_true", help="rescale truncated series rows to their exact mass")

    p = argparse.ArgumentParser(prog="grig2", description="Grigorchuk groups, random walks and induced measures")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    def measure_flags(sp):
        sp.add_argument("--measure", help="JSON measure file (default: uniform on e,a,b,c,d)")
        sp.add_argument("--x", type=int, default=0, choices=(0, 1), help="internal state to induce on")
        sp.add_argument("--no-substitute", action="store_true", help="keep t0+t1+t2 instead of 2a+e")

    sp = add("wordproblem", cmd_wordproblem, "decide whether a word is trivial")
    sp.add_argument("--group", default="universal")
    sp.add_argument("--word", required=True)

    sp = add("witness", cmd_witness, "omega prefix and vertex moved by a nontrivial word")
    sp.add_argument("--group", default="universal")
    sp.add_argument("--word", required=True)

    for name, fn in (("growth", cmd_growth), ("folner", cmd_folner)):
        sp = add(name, fn, f"{name} table over balls")
        sp.add_argument("--group", default="universal")
        sp.add_argument("--radius", type=int, default=4)

    sp = add("induce", cmd_induce, "induced measure: exact, truncated and Monte Carlo")
    measure_flags(sp)
    sp.add_argument("--blocks", type=int, default=10**6, help="return blocks to simulate (0 skips)")
    sp.add_argument("--json", help="also write the exact induced measure as JSON")

    sp = add("iterate", cmd_iterate, "coefficient dynamics of repeated induction")
    sp.add_argument("--start", default="1/5,1/5,1/5", help="c0,cA,cg")
    sp.add_argument("--steps", type=int, default=60)
    sp.add_argument("--closed-form", action="store_true", help="skip the exact induction at each step")
    sp.add_argument("--compare", action="store_true", help="entropy with and without the substitution")

    sp = add("entropy-report", cmd_entropy_report, "H(mu^k)/k for the base and induced walks")
    measure_flags(sp)
    sp.add_argument("--kmax", type=int, default=5)

    sp = add("simulate", cmd_simulate, "Monte Carlo: plain walk, return-block trace or quotient chain")
    measure_flags(sp)
    sp.add_argument("--kind", choices=("walk", "trace", "occupancy"), default="walk")
    sp.add_argument("--steps", type=int, default=2)
    sp.add_argument("--paths", type=int, default=10**5, help="paths (walk) or return blocks (trace)")

    sp = add("interval-check", cmd_interval_check, "interval picture versus tree action")
    sp.add_argument("--group", nargs="+", default=["/0", "/01", "/012"])
    sp.add_argument("--depth", type=int, default=12)
    sp.add_argument("--samples", type=int, default=1000, help="random points (0 = all points)")

    sp = add("selftest", cmd_selftest, "run the acceptance suite")
    sp.add_argument("--only", help="comma separated criterion numbers")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (WordError, InsufficientOmega, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ResourceCapExceeded, TooLarge, NonConvergent, OverflowError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except AssertionError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
