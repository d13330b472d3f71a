"""Command-line interface.

Exit codes: 0 success / property holds, 1 property fails (witness printed),
2 input error, 3 the scaling function breaks a model invariant.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import analysis, families, scaling
from . import mechanisms as mech_mod
from .errors import DiscontinuityError, NonPositiveError
from .instance import LocationProfile, max_cost, total_cost
from .optimal import grid_points, optimal
from .reproduce import CASES, DEFAULT_SEED, reproduce

SEED_ENV = "SCALED_FLP_SEED"


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, output) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", newline="") as fh:
            fh.write(text)


def _load_json_file(path, what):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} file {path} is not valid JSON: {exc}") from exc


def _scaling(path):
    return scaling.from_dict(_load_json_file(path, "scaling"))


def _profile(path):
    data = _load_json_file(path, "profile")
    if not isinstance(data, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in data):
        raise InputError(f"profile file {path} must hold a JSON array of numbers")
    return LocationProfile(data)


def _mechanism(descriptor):
    """Inline JSON descriptor or path to a JSON file."""
    text = descriptor.strip()
    if not text.startswith("{"):
        return mech_mod.from_dict(_load_json_file(descriptor, "mechanism"))
    try:
        return mech_mod.from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InputError(f"mechanism descriptor is not valid JSON: {exc}") from exc


def _seed(args) -> int:
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"{SEED_ENV}={env!r} is not an integer") from None
    return args.seed if args.seed is not None else DEFAULT_SEED


def _step(value: str) -> float:
    step = float(value)
    if not 0 < step <= 0.01:
        raise argparse.ArgumentTypeError("grid step must lie in (0, 0.01]")
    return step


def _samples(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("sample count must be >= 1")
    return n


# subcommands -----------------------------------------------------------------

def cmd_optimize(args) -> int:
    q, x = _scaling(args.scaling), _profile(args.profile)
    res = optimal(q, x, args.objective)
    if args.emit_curve:
        ys = grid_points(args.step)
        with open(args.emit_curve, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["y", "q", "tc", "mc"])
            for y, qy, tc, mc in zip(ys, q(ys), total_cost(q, ys, x), max_cost(q, ys, x)):
                w.writerow([repr(float(y)), repr(float(qy)), repr(float(tc)), repr(float(mc))])
    _emit(_dump(res.to_dict()), args.output)
    return 0


def cmd_check(args) -> int:
    q = _scaling(args.scaling)
    if args.mechanism is None:
        rep = scaling.check_single_peaked_condition(q)
        _emit(_dump(rep.to_dict()), args.output)
        return 0 if rep.satisfied else 1
    if args.profile is None:
        raise InputError("--mechanism needs --profile")
    mech, x = _mechanism(args.mechanism), _profile(args.profile)
    cert = analysis.find_sp_violation(mech, q, x, args.step)
    out = {"mechanism": mech.name, "grid_step": args.step, "violation": cert is not None,
           "certificate": cert.to_dict() if cert else None}
    _emit(_dump(out), args.output)
    return 1 if cert else 0


def cmd_ratio(args) -> int:
    mech = _mechanism(args.mechanism)
    if args.scaling or args.profile:
        if not (args.scaling and args.profile):
            raise InputError("--scaling and --profile go together")
        q, x = _scaling(args.scaling), _profile(args.profile)
        reports = [analysis.approx_ratio(mech, q, x, args.objective, instance="0")]
    else:
        seed = _seed(args)
        family = families.FAMILIES[args.family](args.max_segments, args.max_agents)
        reports = list(analysis.ratio_sweep(mech, family, args.samples, args.objective, seed))
    top = analysis.worst(reports)
    if args.format == "csv":
        buf = io.StringIO()
        analysis.write_csv(reports, buf)
        row = analysis.csv_row(top)
        row[1] = "max"
        csv.writer(buf, lineterminator="\n").writerow(row)
        _emit(buf.getvalue(), args.output)
    else:
        _emit(_dump({"rows": [r.to_dict() for r in reports], "summary": top.to_dict()}), args.output)
    return 0


def cmd_reproduce(args) -> int:
    if args.case != "all" and args.case not in CASES:
        raise InputError(f"unknown case {args.case!r}; choose from {', '.join(CASES)} or all")
    seed = _seed(args)
    reports = reproduce(args.case, seed)
    if not isinstance(reports, list):
        reports = [reports]
    if args.format == "json":
        _emit(_dump([r.to_dict() for r in reports]), args.output)
    else:
        lines = []
        for r in reports:
            lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.case_id} ({len(r.checks)} assertions)")
            for c in r.checks:
                exp = c.expected
                act = "inf" if isinstance(c.actual, float) and math.isinf(c.actual) else c.actual
                lines.append(f"    {'ok ' if c.passed else 'BAD'}  {c.name}: {act} (expected {exp})")
        _emit("\n".join(lines) + "\n", args.output)
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scaled-flp",
                                description="Facility location with scaling effects.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")

    sp = sub.add_parser("optimize", help="optimal facility position")
    sp.add_argument("--objective", choices=["tc", "mc"], default="tc")
    sp.add_argument("--scaling", required=True, help="scaling-function JSON file")
    sp.add_argument("--profile", required=True, help="agent-position JSON file")
    sp.add_argument("--emit-curve", metavar="CSV",
                    help="also dump y, q(y), TC(y), MC(y) samples to this CSV file")
    sp.add_argument("--step", type=_step, default=1e-3, help="sampling step for --emit-curve")
    common(sp)
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("check", help="single-peakedness condition or strategyproofness search")
    sp.add_argument("--scaling", required=True)
    sp.add_argument("--mechanism", help="mechanism descriptor (inline JSON or file)")
    sp.add_argument("--profile")
    sp.add_argument("--step", type=_step, default=1e-3, help="misreport grid step")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("ratio", help="approximation ratio on one instance or a random sweep")
    sp.add_argument("--mechanism", required=True)
    sp.add_argument("--objective", choices=["tc", "mc"], default="tc")
    sp.add_argument("--scaling")
    sp.add_argument("--profile")
    sp.add_argument("--family", choices=sorted(families.FAMILIES), default="condition")
    sp.add_argument("--samples", type=_samples, default=100)
    sp.add_argument("--max-segments", type=int, default=6)
    sp.add_argument("--max-agents", type=int, default=8)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    common(sp)
    sp.set_defaults(func=cmd_ratio)

    sp = sub.add_parser("reproduce", help="recompute a worked example or bound")
    sp.add_argument("case", help=f"one of {', '.join(CASES)}, or all")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--format", choices=["table", "json"], default="table")
    common(sp)
    sp.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (DiscontinuityError, NonPositiveError) as exc:
        print(f"error: invalid scaling function: {exc}", file=sys.stderr)
        return 3
    except (InputError, ValueError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
