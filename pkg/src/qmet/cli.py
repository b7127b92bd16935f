"""``qmet`` command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain failure or counterexample,
3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .ext import fmt, rational
from .powerdomains import LowerSet, NotClosed, QuasiLens, UpperSet, dH, dP, dQ
from .previsions import Fork, KindMismatch, fork_distance
from .space import InvalidSpace, QSpace, SpaceError
from .suites import SUITES, run_suite
from .valuations import (
    NotNormalized, SimpleValuation, SpaceMismatch, decompose_plan, dkrh_lp, dkrh_transport, dkrha_transport,
)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3

KINDS = ("dkrh", "dkrh-a", "dh", "dq", "dp", "fork")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class _IOFailure(Exception):
    pass


def _emit(payload: dict, out: str | None = None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2)
    print(text)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _IOFailure(f"{path}: {exc}") from exc


def _load_space(path: str) -> QSpace:
    data = _read_json(path)
    try:
        return QSpace.from_json(data)
    except (KeyError, TypeError) as exc:
        raise _IOFailure(f"{path}: not a space document ({exc})") from exc


def cmd_validate(args) -> int:
    data = _read_json(args.space)
    try:
        space = QSpace.from_json(data)
    except InvalidSpace as exc:
        _emit({"valid": False, "violations": [_violation_json(v) for v in exc.violations]})
        return EXIT_DOMAIN
    except SpaceError as exc:
        _emit({"valid": False, "violations": [{"kind": type(exc).__name__, "message": str(exc)}]})
        return EXIT_DOMAIN
    except (KeyError, TypeError, ValueError) as exc:
        raise _IOFailure(f"{args.space}: not a space document ({exc})") from exc
    _emit({"valid": True, "n": space.n, "symmetric": space.is_symmetric()})
    return EXIT_OK


def _violation_json(v: SpaceError) -> dict:
    pts = [getattr(v, k) for k in ("x", "y", "z") if hasattr(v, k)]
    return {"kind": type(v).__name__, "points": pts, "message": str(v)}


def _load_object(space: QSpace, kind: str, path: str):
    data = _read_json(path)
    if kind in ("dkrh", "dkrh-a"):
        return SimpleValuation.from_json(space, data)
    if kind == "dh":
        return LowerSet.checked(space, (space.index(s) for s in data))
    if kind == "dq":
        return UpperSet.checked(space, (space.index(s) for s in data))
    if kind == "dp":
        return QuasiLens.from_json(space, data)
    return Fork.from_json(space, data)


def cmd_dist(args) -> int:
    bound = rational(args.bound) if args.bound is not None else None
    if bound is not None and bound <= 0:
        raise UsageError("--bound must be positive")
    if args.kind in ("dkrh-a", "fork") and bound is None:
        raise UsageError(f"--kind {args.kind} requires --bound")
    space = _load_space(args.space)
    lhs = _load_object(space, args.kind, args.lhs)
    rhs = _load_object(space, args.kind, args.rhs)
    report: dict = {"kind": args.kind}
    if bound is not None:
        report["bound"] = fmt(bound)
    if args.kind == "dkrh":
        value = dkrh_lp(space, lhs, rhs)
        report["value"] = fmt(value)
        if lhs.mass == 1 and rhs.mass == 1:
            tr, plan = dkrh_transport(space, lhs, rhs)
            report["routes"] = {"lp": fmt(value), "transport": fmt(tr)}
            if tr != value:
                report["error"] = "routes disagree"
                _emit(report)
                return EXIT_DOMAIN
            if plan is not None:
                report["witness"] = {"plan": plan.to_json(space), "moves": _moves(space, lhs, plan)}
    elif args.kind == "dkrh-a":
        value = dkrh_lp(space, lhs, rhs, bound)
        report["value"] = fmt(value)
        if lhs.mass == 1 and rhs.mass == 1:
            tr, plan = dkrha_transport(space, lhs, rhs, bound)
            report["routes"] = {"lp": fmt(value), "transport": fmt(tr)}
            report["witness"] = {"plan": plan.to_json(space)}
            if tr != value:
                report["error"] = "routes disagree"
                _emit(report)
                return EXIT_DOMAIN
    elif args.kind == "dh":
        report["value"] = fmt(dH(space, lhs, rhs, bound))
    elif args.kind == "dq":
        report["value"] = fmt(dQ(space, lhs, rhs, bound))
    elif args.kind == "dp":
        report["value"] = fmt(dP(space, lhs, rhs, bound))
    else:
        report["value"] = fmt(fork_distance(space, lhs, rhs, bound))
    _emit(report)
    return EXIT_OK


def _moves(space: QSpace, mu, plan) -> list[dict]:
    lab = space.labels
    return [{"from": lab[m.source], "to": lab[m.target], "mass": fmt(m.mass), "cost": fmt(m.cost)}
            for m in decompose_plan(space, mu, plan)]


def cmd_check(args) -> int:
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(['all', *SUITES])}")
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    space = _load_space(args.space) if args.space else None
    report = run_suite(args.suite, args.seed, args.trials, space)
    _emit(report, args.out)
    return EXIT_OK if report["ok"] else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qmet", description="Exact quasi-metrics on finite spaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check the quasi-metric axioms of a space file")
    p.add_argument("space")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dist", help="distance between two objects over a space")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--bound", help="rational bound a > 0, e.g. 1/2")
    p.add_argument("space")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("check", help="run a seeded property suite")
    p.add_argument("suite")
    p.add_argument("--space")
    default_seed = os.environ.get("QMET_SEED")
    p.add_argument("--seed", type=int, default=int(default_seed) if default_seed else 0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qmet: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _IOFailure as exc:
        print(f"qmet: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NotClosed, NotNormalized, KindMismatch, SpaceMismatch, SpaceError, KeyError, ValueError) as exc:
        print(f"qmet: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
