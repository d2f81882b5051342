"""Command-line front end.

Exit codes: 0 feasible / success, 1 infeasible, 2 usage or parse error,
3 request outside a closed form's domain.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from ._num import coerce, fmt
from .errors import (NotInRegionError, SrrError, UnsupportedFormatError,
                     UnsupportedParametersError)
from .greedy import maximize_lambda_K_greedy
from .lp import LpMode, feasible, maximize_last
from .region import closed_form_L, cross_validate, export, sample_boundary
from .simplex import DEFAULT_TOL
from .storage import enumerate_repair_groups, system_from_spec

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

SPEC_KEYS = {"K", "mu", "systematic", "coded", "nodes", "mode", "grid_step"}


class UsageError(Exception):
    pass


def load_spec(path):
    """Parse a system spec file; returns ``(system, defaults)``."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text, parse_float=Fraction, parse_int=int)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise UsageError(f"{path}: top level must be an object")
    unknown = sorted(set(doc) - SPEC_KEYS)
    if unknown:
        raise UsageError(f"{path}: unknown keys {', '.join(unknown)}")
    try:
        system = system_from_spec(doc)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path}: missing or malformed field {exc}") from exc
    except SrrError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    return system, {k: doc[k] for k in ("mode", "grid_step") if k in doc}


def _mode(args, defaults) -> LpMode:
    name = args.mode or os.environ.get("SRR_MODE") or defaults.get("mode") or "rational"
    try:
        return LpMode.parse(name, args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _numbers(values, count, what, exact):
    if len(values) != count:
        raise UsageError(f"{what} needs {count} values, got {len(values)}")
    try:
        out = [coerce(v, exact) for v in values]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad number in {what}: {exc}") from exc
    if any(v < 0 for v in out):
        raise UsageError(f"{what} must be nonnegative")
    return out


def cmd_groups(args) -> int:
    system, _ = load_spec(args.spec)
    table = enumerate_repair_groups(system)
    print(table.format())
    if not any(table.gamma):
        print("warning: no file recoverable", file=sys.stderr)
    return EXIT_OK


def cmd_feasible(args) -> int:
    system, defaults = load_spec(args.spec)
    mode = _mode(args, defaults)
    lam = _numbers(args.demand, system.K, "demand", mode.exact)
    witness = feasible(system, None, lam, mode)
    if not witness.feasible:
        print("infeasible")
        return EXIT_INFEASIBLE
    print("feasible")
    if witness.binding_nodes:
        print("binding nodes: " + ",".join(str(j + 1) for j in sorted(witness.binding_nodes)))
    if args.witness:
        with open(args.witness, "w", encoding="utf-8") as fh:
            fh.write(witness.strategy.to_json() + "\n")
    return EXIT_OK


def _closed(system, lam_hat, mu):
    try:
        return closed_form_L(system, lam_hat, mu)
    except NotInRegionError:
        return None


def cmd_maximize(args) -> int:
    system, defaults = load_spec(args.spec)
    mode = _mode(args, defaults)
    lam_hat = _numbers(args.lambda_hat, system.K - 1, "lambda_hat", mode.exact)
    mu = coerce(system.mu, mode.exact)
    results = {}
    methods = ("lp", "closed", "greedy") if args.method == "all" else (args.method,)
    for method in methods:
        try:
            if method == "lp":
                results[method] = maximize_last(system, None, lam_hat, mode)[0]
            elif method == "closed":
                results[method] = _closed(system, lam_hat, mu)
            else:
                results[method], trace = maximize_lambda_K_greedy(system.with_mu(mu), lam_hat)
                if args.trace:
                    with open(args.trace, "w", encoding="utf-8") as fh:
                        fh.write(trace.to_jsonl(system))
        except UnsupportedParametersError as exc:
            if args.method != "all":
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_DOMAIN
            results[method] = exc
    if args.method != "all":
        value = results[args.method]
        if value is None:
            print("not in region")
            return EXIT_INFEASIBLE
        print(fmt(value))
        return EXIT_OK
    values = []
    for method in methods:
        value = results[method]
        if isinstance(value, Exception):
            print(f"{method}: n/a ({value})")
        elif value is None:
            print(f"{method}: not in region")
            values.append(None)
        else:
            print(f"{method}: {fmt(value)}")
            values.append(value)
    tol = 0 if mode.exact else mode.tol
    if None in values:
        agree = all(v is None for v in values)
    else:
        agree = not values or max(values) - min(values) <= tol
    print("agree" if agree else "DISAGREE")
    return EXIT_OK if results["lp"] is not None else EXIT_INFEASIBLE


def cmd_region(args) -> int:
    system, defaults = load_spec(args.spec)
    mode = _mode(args, defaults)
    step = args.step or defaults.get("grid_step") or "0.25"
    if args.format == "svg" and system.K > 3:
        print(f"error: svg export supports K <= 3, got K={system.K}", file=sys.stderr)
        return EXIT_USAGE
    try:
        region = sample_boundary(system, coerce(step, mode.exact), args.method, mode)
    except UnsupportedParametersError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    out = args.out or f"region.{args.format}"
    try:
        export(region, args.format, out)
    except UnsupportedFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot write {out}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    max_L = region.max_L()
    print(f"samples: {len(region.samples)}")
    print(f"max L: {'-' if max_L is None else fmt(max_L)}")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_validate(args) -> int:
    system, defaults = load_spec(args.spec)
    mode = _mode(args, defaults)
    step = args.step or defaults.get("grid_step") or "0.25"
    if system.K != 3:
        print("error: validate compares the three-file closed form; K must be 3", file=sys.stderr)
        return EXIT_DOMAIN
    report = cross_validate(system, coerce(step, mode.exact), mode)
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("rational", "float"), default=None,
                        help="LP arithmetic (default: $SRR_MODE, then the spec file, then rational)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="float-mode tolerance")

    ap = argparse.ArgumentParser(prog="srr", description="Service rate regions of MDS-core storage")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("groups", parents=[common], help="list repair groups per file")
    p.add_argument("spec")
    p.set_defaults(func=cmd_groups)

    p = sub.add_parser("feasible", parents=[common], help="test a demand vector for membership")
    p.add_argument("spec")
    p.add_argument("demand", nargs="*", help="K demands")
    p.add_argument("--witness", metavar="PATH", help="write the splitting strategy as JSON")
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("maximize", parents=[common], help="largest demand for the last file")
    p.add_argument("spec")
    p.add_argument("lambda_hat", nargs="*", help="K-1 demands")
    p.add_argument("--method", choices=("lp", "closed", "greedy", "all"), default="lp")
    p.add_argument("--trace", metavar="PATH", help="write the greedy trace as JSON lines")
    p.set_defaults(func=cmd_maximize)

    p = sub.add_parser("region", parents=[common], help="sample and export the region boundary")
    p.add_argument("spec")
    p.add_argument("--step", default=None)
    p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    p.add_argument("--out", default=None)
    p.add_argument("--method", choices=("lp", "closed", "greedy"), default="lp")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("validate", parents=[common],
                       help="cross-check LP, closed form and greedy on a three-file system")
    p.add_argument("spec")
    p.add_argument("--step", default=None)
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
