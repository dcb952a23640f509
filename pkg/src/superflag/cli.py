"""Command-line front end: ``superflag <command> [options]``."""

from __future__ import annotations

import argparse
import json
import re
import sys

from .flag_atlas import get_atlas, parse_flag
from .global_solver import (DEFAULT_DEGREE, EXCEPTIONAL_DEGREE, SolveReport, lift_query, mu_image_rank,
                            mu_kernel, solve_global_fields, solve_global_functions, vertical_directions)
from .fields import fundamental_field, is_projectable, project
from .lie_superalgebra import GlElement, h4_basis
from .verify import SUITES, Check, run_suite
from .weights import format_table, section_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSTABLE = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _flag(text):
    try:
        return parse_flag(text)
    except ValueError as e:
        raise UsageError(str(e)) from e


def _emit(args, data: dict, text: str):
    if args.format == "json":
        print(json.dumps(data, sort_keys=True, indent=1, ensure_ascii=False))
    else:
        print(text)


def _report_text(rep: SolveReport, show_basis: bool) -> str:
    lines = [f"space: {rep.space}",
             f"kind: {rep.kind}",
             f"degree: {rep.degree}",
             f"dimension: {rep.dimension}",
             f"dimension at degree {rep.degree + 1}: {rep.dimension_next}",
             f"stabilized: {'yes' if rep.stabilized else 'no'}"]
    if show_basis:
        lines.append("basis:")
        for i, b in enumerate(rep.basis, 1):
            s = str(b) if rep.kind == "fields" else b.to_str(get_atlas(parse_flag(rep.space)).standard.display_names())
            lines.append(f"  {i:>3}. {s}")
    return "\n".join(lines)


def cmd_dim(args) -> int:
    flag = _flag(args.space)
    dirs = vertical_directions(get_atlas(flag).standard) if args.vertical else None
    rep = solve_global_fields(flag, args.degree, directions=dirs, parallel=args.parallel)
    _emit(args, rep.to_json(), _report_text(rep, args.basis))
    return EXIT_OK if rep.stabilized else EXIT_UNSTABLE


def cmd_functions(args) -> int:
    rep = solve_global_functions(_flag(args.space), args.degree)
    _emit(args, rep.to_json(), _report_text(rep, args.basis))
    return EXIT_OK if rep.stabilized else EXIT_UNSTABLE


def cmd_kernel(args) -> int:
    flag = _flag(args.space)
    ker = mu_kernel(flag)
    rank = mu_image_rank(flag)
    data = {"space": str(flag), "kernel": [k.to_json() for k in ker], "rank": rank}
    text = "\n".join([f"space: {flag}", f"kernel of mu: {', '.join(repr(k) for k in ker) or '0'}",
                      f"rank of mu: {rank}"])
    _emit(args, data, text)
    return EXIT_OK


def cmd_project(args) -> int:
    flag = _flag(args.space)
    if flag.r < 2:
        raise UsageError("project needs a flag with at least two steps")
    rep = solve_global_fields(flag, args.degree, parallel=args.parallel)
    rows, lines = [], [f"space: {flag}", f"base: {flag.base()}",
                       f"global fields: {rep.dimension} (stabilized: {'yes' if rep.stabilized else 'no'})"]
    for i, v in enumerate(rep.basis, 1):
        ok, _ = is_projectable(v)
        proj = project(v) if ok else None
        rows.append({"field": v.to_json(), "projectable": ok,
                     "projection": proj.to_json() if proj is not None else None})
        lines.append(f"  {i:>3}. {v}")
        lines.append(f"       -> {proj if ok else 'not projectable'}")
    _emit(args, {"space": str(flag), "report": rep.to_json(), "projections": rows}, "\n".join(lines))
    return EXIT_OK if rep.stabilized else EXIT_UNSTABLE


_GEN_RE = re.compile(r"^E(\d)(\d)$")


def _base_field(flag, name: str):
    base = get_atlas(flag.base()).standard
    if name == "theta":
        if str(flag.base()) != "Gr(2|2; 1|2)":
            raise UsageError("theta is defined on the base Gr(2|2; 1|2)")
        return h4_basis(base)[0][-1][2]
    m = _GEN_RE.match(name)
    if not m:
        raise UsageError(f"unknown base field {name!r}; use 'theta' or a generator like E21")
    a, b = int(m.group(1)), int(m.group(2))
    if not (1 <= a <= flag.m + flag.n and 1 <= b <= flag.m + flag.n):
        raise UsageError(f"generator {name} out of range")
    return fundamental_field(GlElement(flag.m, flag.n, {(a, b): 1}), base)


def cmd_lift(args) -> int:
    flag = _flag(args.space)
    if flag.r < 2:
        raise UsageError("lift needs a flag with at least two steps")
    w = _base_field(flag, args.field)
    res = lift_query(w, flag, args.degree)
    lines = [f"space: {flag}", f"base field: {w}", f"feasible: {'yes' if res.feasible else 'no'}",
             f"vertical solutions of the homogeneous system: {res.vertical_dimension}"]
    if res.witness is not None:
        lines.append(f"witness: {res.witness}")
    if res.local is not None:
        if args.verbose:
            lines.append("bracket conditions:")
            lines += [f"  {e}" for e in res.local.equations]
        lines.append("derived first derivatives of the vertical part " +
                     ", ".join(f"{fn} d/d{c}" for fn, c in res.local.functions.items()) + ":")
        lines += [f"  {k} = {v}" for k, v in res.local.derived.items() if args.verbose or v != "0"]
        lines.append("mixed partials:")
        lines += [f"  {c['detail']} ({'consistent' if c['consistent'] else 'CONTRADICTION'})"
                  for c in res.local.checks if args.verbose or not c["trivial"]]
    if res.certificate:
        lines.append("certificate:")
        lines += [f"  [{c['kind']}] {c['equation']}" for c in res.certificate]
    _emit(args, {"space": str(flag), "field": args.field, **res.to_json()}, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    kwargs = {}
    if args.space:
        kwargs["space"] = str(_flag(args.space))
    if args.suite == "homomorphism":
        kwargs.update(seed=args.seed, samples=args.samples, orientation=args.orientation)
    elif args.space and args.suite not in ("kernel", "functions"):
        raise UsageError(f"suite {args.suite} does not take --space")
    checks = run_suite(args.suite, **kwargs)
    passed = all(c.ok for c in checks)
    data = {"suite": args.suite, "passed": passed, "checks": [c.to_json() for c in checks]}
    lines = [f"{'PASS' if c.ok else 'FAIL'}  {c.name}" + (f"  [{c.detail}]" if c.detail and (args.verbose or not c.ok)
                                                      else "") for c in checks]
    lines.append(f"{args.suite}: {sum(c.ok for c in checks)}/{len(checks)} passed")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_table(args) -> int:
    records = section_table(args.max_m, args.max_n)
    _emit(args, {"rows": records}, format_table(records))
    return EXIT_OK if all(r["match"] for r in records) else EXIT_FAIL


def parse_verify_output(text: str) -> dict:
    """Inverse of the JSON emitted by ``verify``."""
    data = json.loads(text)
    data["checks"] = [Check.from_json(c) for c in data["checks"]]
    return data


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--parallel", action="store_true", help="generate chart constraints in threads")

    p = argparse.ArgumentParser(prog="superflag", description="Vector fields on flag supermanifolds.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dim", parents=[common], help="dimension of the space of global vector fields")
    d.add_argument("--space", required=True)
    d.add_argument("--degree", type=int, default=DEFAULT_DEGREE)
    d.add_argument("--basis", action="store_true", help="print the basis")
    d.add_argument("--vertical", action="store_true", help="restrict to vertical fields")
    d.set_defaults(func=cmd_dim)

    f = sub.add_parser("functions", parents=[common], help="dimension of the space of global functions")
    f.add_argument("--space", required=True)
    f.add_argument("--degree", type=int, default=DEFAULT_DEGREE)
    f.add_argument("--basis", action="store_true")
    f.set_defaults(func=cmd_functions)

    k = sub.add_parser("kernel", parents=[common], help="kernel and rank of X -> mu(X)")
    k.add_argument("--space", required=True)
    k.set_defaults(func=cmd_kernel)

    pr = sub.add_parser("project", parents=[common], help="project global fields of a flag to its base")
    pr.add_argument("--space", required=True)
    pr.add_argument("--degree", type=int, default=EXCEPTIONAL_DEGREE)
    pr.set_defaults(func=cmd_project)

    li = sub.add_parser("lift", parents=[common], help="try to lift a base field to the flag")
    li.add_argument("--space", required=True)
    li.add_argument("--field", default="theta", help="'theta' or a generator such as E21")
    li.add_argument("--degree", type=int, default=EXCEPTIONAL_DEGREE)
    li.add_argument("-v", "--verbose", action="store_true")
    li.set_defaults(func=cmd_lift)

    v = sub.add_parser("verify", parents=[common], help="run a verifier suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--space")
    v.add_argument("--samples", type=int, default=20)
    v.add_argument("--orientation", choices=["both", "literal", "reversed"], default="both")
    v.add_argument("-v", "--verbose", action="store_true")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", parents=[common], help="section dimensions of the fiber bundle over (m,n,k1,l1)")
    t.add_argument("--max-m", type=int, default=4)
    t.add_argument("--max-n", type=int, default=4)
    t.set_defaults(func=cmd_table)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"superflag: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
