"""Command-line entry point: ``gpcheck {sieve,geometry,verify,order}``.

Exit codes: 0 success (for ``sieve`` and ``geometry``, a clean run whatever
the outcome), 1 a verification failed, 2 bad usage, unreadable input, or a
work budget too small for the request (verify batches record that per item).
JSON output is deterministic: re-reading a report and dumping it again with
:func:`dump_json` gives the same bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence

from . import config
from .claims import CLAIM_NAMES, DEFAULT_SUITE, parse_batch, run_batch, run_claim
from .gf import field_of_order
from .mgroup import MatrixGroup, gl_generators, group_order_bsgs, order_formula, sl_generators
from .polygon import (
    GeometryError,
    IncidenceGeometry,
    PolygonParams,
    build_pg2,
    build_symplectic_quadrangle,
    classify_generalized_ngon,
    dual,
    parse_incidence,
)
from .sieve import (
    PointCountKind,
    default_table,
    exclusion_report,
    format_report_text,
    json_int,
    parse_table,
    solve_order_equation,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# -- sieve -----------------------------------------------------------------------

def cmd_sieve(args) -> tuple[Any, str, int]:
    if args.builtin_table or args.table:
        if args.table:
            try:
                with open(args.table, encoding="utf-8") as fh:
                    table = parse_table(fh.read())
            except (OSError, ValueError) as exc:
                raise UsageError(f"cannot read table {args.table}: {exc}") from None
        else:
            table = default_table()
        rows = exclusion_report(table)
        return [r.to_dict() for r in rows], format_report_text(rows), EXIT_OK
    if args.kind is None or args.n is None:
        raise UsageError("sieve needs --kind and --n, or --builtin-table, or --table FILE")
    if args.n < 1:
        raise UsageError(f"--n must be a positive integer, got {args.n}")
    sols = solve_order_equation(args.kind, args.n)
    data = {"kind": args.kind, "n": json_int(args.n), "solutions": [list(p) for p in sols]}
    text = f"{args.kind} N={args.n}: " + (" ".join(f"({s},{t})" for s, t in sols) or "no solutions")
    return data, text, EXIT_OK


# -- geometry --------------------------------------------------------------------

def _fixture(spec: str) -> IncidenceGeometry:
    try:
        name, q = spec.split(":")
        F = field_of_order(int(q))
    except ValueError as exc:
        raise UsageError(f"bad fixture {spec!r}: use pg2:q or w:q ({exc})") from None
    if name == "pg2":
        return build_pg2(F)
    if name == "w":
        return build_symplectic_quadrangle(F)
    raise UsageError(f"unknown fixture {name!r}: use pg2:q or w:q")


def cmd_geometry(args) -> tuple[Any, str, int]:
    if (args.file is None) == (args.fixture is None):
        raise UsageError("geometry needs exactly one of FILE or --fixture")
    if args.fixture:
        S, source = _fixture(args.fixture), f"fixture {args.fixture}"
    else:
        try:
            with open(args.file, encoding="utf-8") as fh:
                S = parse_incidence(fh.read(), args.allow_repeated_lines)
        except (OSError, GeometryError) as exc:
            raise UsageError(f"cannot read {args.file}: {exc}") from None
        source = args.file
    if args.dual:
        S, source = dual(S), f"dual of {source}"
    res = classify_generalized_ngon(S)
    data: dict[str, Any] = {"source": source, "points": S.num_points, "lines": S.num_lines}
    if isinstance(res, PolygonParams):
        data["polygon"] = {"n": res.n, "s": res.s, "t": res.t}
        text = f"{source}: generalised {res.n}-gon of order ({res.s},{res.t})"
    else:
        data["rejected"] = {"reason": res.reason, "detail": res.detail}
        text = f"{source}: rejected ({res.reason}: {res.detail})"
    return data, text, EXIT_OK


# -- verify ----------------------------------------------------------------------

_PARAM_FLAGS = ("n", "k", "k1", "q", "i", "trials", "seed")


def _report_line(r: dict) -> str:
    params = " ".join(f"{k}={v}" for k, v in r["params"].items())
    status = "PASS" if r["passed"] else "FAIL"
    extra = f"  {r['error']}" if "error" in r else ""
    if "values" in r and "order" in r["values"]:
        extra += f"  order={r['values']['order']}"
    return f"{status} {r['claim']} {params}{extra}"


def cmd_verify(args) -> tuple[Any, str, int]:
    chosen = sum(bool(x) for x in (args.all_defaults, args.claim, args.spec))
    if chosen != 1:
        raise UsageError("verify needs exactly one of --all-defaults, --claim NAME, --spec FILE")
    if args.claim:
        params = {p: getattr(args, p) for p in _PARAM_FLAGS if getattr(args, p) is not None}
        try:
            reports = [run_claim(args.claim, params).to_dict()]
        except config.BudgetExceeded as exc:
            reports = [{"claim": args.claim, "params": params, "error": f"BudgetExceeded: {exc}",
                        "passed": False}]
        except ValueError as exc:
            raise UsageError(f"{args.claim}: {exc}") from None
    else:
        if args.spec:
            try:
                with open(args.spec, encoding="utf-8") as fh:
                    items = parse_batch(fh.read())
            except (OSError, ValueError) as exc:
                raise UsageError(f"cannot read claims file {args.spec}: {exc}") from None
        else:
            items = list(DEFAULT_SUITE)
        reports = run_batch(items)
    ok = all(r["passed"] for r in reports)
    text = "\n".join(_report_line(r) for r in reports)
    text += f"\n{sum(r['passed'] for r in reports)}/{len(reports)} passed"
    return reports, text, EXIT_OK if ok else EXIT_FAIL


# -- order -----------------------------------------------------------------------

def cmd_order(args) -> tuple[Any, str, int]:
    try:
        order = order_formula(args.family, *args.params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    data: dict[str, Any] = {"family": args.family, "params": list(args.params), "order": json_int(order)}
    text = str(order)
    code = EXIT_OK
    if args.bsgs_check:
        if args.family in ("GL", "SL"):
            n, q = args.params
            F = field_of_order(q)
            gens = (gl_generators if args.family == "GL" else sl_generators)(n, F)
            try:
                bsgs = group_order_bsgs(MatrixGroup(F, n, gens))
            except config.BudgetExceeded as exc:
                data["bsgs_check"] = f"skipped: {exc}"
            else:
                data["bsgs_order"] = json_int(bsgs)
                data["bsgs_check"] = "match" if bsgs == order else "MISMATCH"
                code = EXIT_OK if bsgs == order else EXIT_FAIL
        else:
            data["bsgs_check"] = "skipped: only GL and SL have built-in generators"
        text += f"  (bsgs: {data['bsgs_check']})"
    return data, text, code


# -- parser ----------------------------------------------------------------------

def _positive(raw: str) -> int:
    value = int(raw)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--output", "-o", default=argparse.SUPPRESS, help="write the report here")
    common.add_argument("--enum-budget", type=_positive, default=argparse.SUPPRESS,
                        help="max subspaces enumerated")
    common.add_argument("--orbit-budget", type=_positive, default=argparse.SUPPRESS,
                        help="max points in a permutation domain or orbit")
    common.add_argument("--closure-cap", type=_positive, default=argparse.SUPPRESS,
                        help="max group size built by brute-force closure")

    p = argparse.ArgumentParser(prog="gpcheck", parents=[common],
                                description="Checks for point-primitive generalised polygons.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sieve", parents=[common], help="solve point-count equations")
    s.add_argument("--kind", choices=[k.value for k in PointCountKind])
    s.add_argument("--n", type=int)
    s.add_argument("--builtin-table", action="store_true")
    s.add_argument("--table", help="JSON list of {group, stabilizer}")
    s.set_defaults(func=cmd_sieve)

    g = sub.add_parser("geometry", parents=[common], help="recognise a generalised polygon")
    g.add_argument("file", nargs="?")
    g.add_argument("--fixture", help="pg2:q or w:q")
    g.add_argument("--dual", action="store_true", help="classify the dual geometry")
    g.add_argument("--allow-repeated-lines", action="store_true")
    g.set_defaults(func=cmd_geometry)

    v = sub.add_parser("verify", parents=[common], help="run witness and generation checks")
    v.add_argument("--all-defaults", action="store_true")
    v.add_argument("--claim", choices=CLAIM_NAMES)
    v.add_argument("--spec", help="JSON list of {claim, params}")
    for flag in _PARAM_FLAGS:
        v.add_argument(f"--{flag}", type=int)
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("order", parents=[common], help="exact order of a named group")
    o.add_argument("family")
    o.add_argument("params", nargs="*", type=int)
    o.add_argument("--bsgs-check", action="store_true")
    o.set_defaults(func=cmd_order)
    return p


_BUDGET_ENV = {
    "enum_budget": "GPCHECK_ENUM_BUDGET",
    "orbit_budget": "GPCHECK_ORBIT_BUDGET",
    "closure_cap": "GPCHECK_CLOSURE_CAP",
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fmt = getattr(args, "format", "json")
    saved = {env: os.environ.get(env) for env in _BUDGET_ENV.values()}
    try:
        for attr, env in _BUDGET_ENV.items():
            if hasattr(args, attr):
                os.environ[env] = str(getattr(args, attr))
        data, text, code = args.func(args)
    except UsageError as exc:
        print(f"gpcheck {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except config.BudgetExceeded as exc:
        # outside verify batches a blown budget means the flags were too tight
        print(f"gpcheck {args.command}: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        for env, old in saved.items():
            if old is None:
                os.environ.pop(env, None)
            else:
                os.environ[env] = old
    out = dump_json(data) if fmt == "json" else text + "\n"
    path = getattr(args, "output", None)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
