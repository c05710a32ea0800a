"""Command-line front end: parse field/expression syntax, compute, verify.

Exit codes: 0 success or verified; 1 verification failure (first
counterexample in the output); 2 parse or domain error.  JSON output is a
single object {command, input, result, certificate?} with sorted keys and no
floating point anywhere; rationals serialize as "a/b" strings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from mwslice import checks
from mwslice.fields import parse_field, parse_unit
from mwslice.filtration import (
    FiltrationQuery,
    convergence_check,
    filtration_report,
    graded_piece,
    moore_filtration,
)
from mwslice.forms import gw_of_form, parse_form, witt_class
from mwslice.milnor_witt import normalize, parse_expression
from mwslice.rewriting import (
    derivation_from_json,
    derive_extended_steinberg,
    verify_derivation,
)
from mwslice.transfers import parse_extension, projection_formula_check, trace_transfer_gw

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def to_jsonable(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}" if obj.denominator != 1 else str(obj.numerator)
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def emit(args, payload: dict, table_lines: list[str]) -> None:
    if args.output == "json":
        text = json.dumps(to_jsonable(payload), sort_keys=True, separators=(",", ":"))
    else:
        text = "\n".join(table_lines)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def _normal_form_json(nf) -> dict:
    out: dict = {"degree": nf.degree, "zero": nf.is_zero}
    if nf.degree == 0:
        out["gw"] = nf.gw.to_json()
    elif nf.degree is not None and nf.degree < 0:
        out["witt"] = list(nf.witt.coords)
    elif nf.degree is not None:
        if nf.field.kind == "finite":
            if nf.degree == 1:
                out["unit_class"] = str(nf.milnor_unit)
                out["ideal_bit"] = nf.ideal_bit
        else:
            out["coord"] = nf.real_coord
    return out


def cmd_gw(args) -> int:
    field = parse_field(args.field)
    cls = gw_of_form(parse_form(field, args.form))
    payload = {"command": "gw", "input": {"field": args.field, "form": args.form},
               "result": cls.to_json()}
    emit(args, payload, [f"GW class of {args.form} over {field}: {cls}"])
    return EXIT_OK


def cmd_witt(args) -> int:
    field = parse_field(args.field)
    w = witt_class(gw_of_form(parse_form(field, args.form)))
    payload = {"command": "witt", "input": {"field": args.field, "form": args.form},
               "result": {"field": str(field), "coords": list(w.coords)}}
    emit(args, payload, [f"Witt class of {args.form} over {field}: {w}"])
    return EXIT_OK


def cmd_mw_normalize(args) -> int:
    field = parse_field(args.field)
    expr = parse_expression(field, args.expr)
    nf = normalize(expr)
    payload = {"command": "mw-normalize",
               "input": {"field": args.field, "expr": args.expr},
               "result": _normal_form_json(nf)}
    emit(args, payload, [f"{expr}  ~>  {nf}"])
    return EXIT_OK


def cmd_mw_derive(args) -> int:
    field = parse_field(args.field)
    units = [parse_unit(field, tok) for tok in args.units.split(",")]
    derivation = derive_extended_steinberg(units)
    verified = verify_derivation(derivation)
    payload = {"command": "mw-derive",
               "input": {"field": args.field, "units": args.units},
               "result": derivation.to_json(),
               "certificate": {"verified": bool(verified.ok)}}
    lines = [f"derivation for [{args.units}] over {field}:"]
    for i, step in enumerate(derivation.steps):
        lines.append(f"  {i}: {step.rule} at term {step.term_index}, factor {step.factor_index}")
    lines.append(f"end: 0, verified: {verified.ok}")
    emit(args, payload, lines)
    return EXIT_OK if verified.ok else EXIT_FAILED


def cmd_mw_verify(args) -> int:
    if args.derivation == "-":
        data = json.load(sys.stdin)
    else:
        with open(args.derivation, encoding="utf-8") as fh:
            data = json.load(fh)
    derivation = derivation_from_json(data)
    res = verify_derivation(derivation)
    payload = {"command": "mw-verify", "input": {"derivation": args.derivation},
               "result": {"verified": bool(res.ok), "failed_step": res.failed_step,
                          "reason": res.reason}}
    emit(args, payload, [f"verified: {res.ok}" + (f" ({res.reason})" if res.reason else "")])
    return EXIT_OK if res.ok else EXIT_FAILED


def cmd_filtration(args) -> int:
    field = parse_field(args.field)
    query = FiltrationQuery(args.n, args.p, args.q, field)
    report = filtration_report(query)
    payload = {"command": "filtration", "input": query.to_json(),
               "result": report.to_json()}
    lines = [
        f"F^{args.n} pi_({args.p},{args.p}) Sigma^{args.q} S({field})",
        f"  N = {report.N}",
        f"  subgroup: {report.subgroup}",
    ]
    if field.kind == "real" and args.p == args.q == 0 and args.n >= 1:
        k = report.subgroup.index_in_saturation()
        lines.append(
            f"  ladder row: I(R)^{args.n} = ({k}) in the index coordinate"
            f"  (signature in {2 * k}Z)"
        )
    emit(args, payload, lines)
    return EXIT_OK


def cmd_graded(args) -> int:
    field = parse_field(args.field)
    query = FiltrationQuery(args.n, args.p, args.q, field)
    shape = graded_piece(query)
    payload = {"command": "graded", "input": query.to_json(),
               "result": {"graded": str(shape), "order": shape.order()}}
    emit(args, payload, [f"gr^{args.n} = F^{args.n}/F^{args.n + 1} = {shape}"])
    return EXIT_OK


def cmd_convergence(args) -> int:
    field = parse_field(args.field)
    rep = convergence_check(field, args.cutoff)
    payload = {"command": "convergence",
               "input": {"field": args.field, "cutoff": args.cutoff},
               "result": {"separated": rep.separated},
               "certificate": {"kind": rep.certificate, "details": list(rep.details)}}
    emit(args, payload, [
        f"convergence over {field} (cutoff {args.cutoff}): separated = {rep.separated}",
        f"  certificate: {rep.certificate}",
    ])
    return EXIT_OK if rep.separated else EXIT_FAILED


def cmd_moore(args) -> int:
    field = parse_field(args.field)
    desc = moore_filtration(args.ell, field, args.n)
    tag = desc.order_or_index()
    if desc.is_zero:
        human = "0"
    elif desc.is_full:
        human = f"full GW/{args.ell}"
    elif isinstance(tag, tuple) and tag[0] == "order" and tag[1] == args.ell:
        human = f"Z/{args.ell}"
    else:
        human = str(desc)
    payload = {"command": "moore",
               "input": {"field": args.field, "ell": args.ell, "n": args.n},
               "result": {"image": human, "subgroup": desc.describe()}}
    emit(args, payload, [f"image of I^{args.n} in GW({field})/{args.ell}: {human}"])
    return EXIT_OK


def cmd_transfer(args) -> int:
    ext = parse_extension(args.ext)
    if args.check == "projection":
        rep = projection_formula_check(ext, args.rank_bound)
        payload = {"command": "transfer", "input": {"ext": args.ext, "check": "projection"},
                   "result": rep.to_json()}
        emit(args, payload, [f"projection formula over {ext}: ok={rep.ok} ({rep.checked} cases)"
                             + (f"; first counterexample: {rep.counterexample}" if rep.counterexample else "")])
        return EXIT_OK if rep.ok else EXIT_FAILED
    if not args.form:
        raise ValueError("transfer needs --form or --check projection")
    cls = gw_of_form(parse_form(ext.top, args.form))
    image = trace_transfer_gw(ext, cls)
    payload = {"command": "transfer",
               "input": {"ext": args.ext, "form": args.form},
               "result": image.to_json()}
    emit(args, payload, [f"Tr_{ext}({args.form}) = {image}"])
    return EXIT_OK


def cmd_check_all(args) -> int:
    profile = args.profile or os.environ.get("MW_SLICE_PROFILE", "quick")
    results = checks.run_all(profile)
    lines = [r.line(with_timing=(profile == "full")) for r in results]
    ok = all(r.ok for r in results)
    lines.append(f"{'ALL CHECKS PASSED' if ok else 'CHECKS FAILED'} (profile {profile})")
    payload = {"command": "check-all", "input": {"profile": profile},
               "result": {"passed": ok,
                          "checks": [{"name": r.name, "ok": r.ok, "cases": r.cases,
                                      "detail": r.detail} for r in results]}}
    emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAILED


def _output_options(sub_parser: argparse.ArgumentParser) -> None:
    # accepted after the subcommand too; SUPPRESS keeps pre-subcommand values
    sub_parser.add_argument(
        "--output", choices=("table", "json"), default=argparse.SUPPRESS
    )
    sub_parser.add_argument("--out", default=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mw-slice",
        description="Exact Grothendieck-Witt / Milnor-Witt computations and the slice filtration",
    )
    parser.add_argument("--output", choices=("table", "json"), default="table")
    parser.add_argument("--out", help="also write the output to this path")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gw", help="GW class of a diagonal form")
    p.add_argument("--field", required=True)
    p.add_argument("--form", required=True, help='form literal, e.g. "<1,-1>"')
    _output_options(p)
    p.set_defaults(func=cmd_gw)

    p = sub.add_parser("witt", help="Witt class of a diagonal form")
    p.add_argument("--field", required=True)
    p.add_argument("--form", required=True)
    _output_options(p)
    p.set_defaults(func=cmd_witt)

    p = sub.add_parser("mw-normalize", help="normal form of a Milnor-Witt expression")
    p.add_argument("--field", required=True)
    p.add_argument("--expr", required=True, help='e.g. "eta*(2 + eta*[-1])"')
    _output_options(p)
    p.set_defaults(func=cmd_mw_normalize)

    p = sub.add_parser("mw-derive", help="certified extended-Steinberg derivation")
    p.add_argument("--field", required=True)
    p.add_argument("--units", required=True, help="comma-separated units summing to 1")
    _output_options(p)
    p.set_defaults(func=cmd_mw_derive)

    p = sub.add_parser("mw-verify", help="replay a serialized derivation")
    p.add_argument("--derivation", required=True, help="path to JSON, or - for stdin")
    _output_options(p)
    p.set_defaults(func=cmd_mw_verify)

    p = sub.add_parser("filtration", help="Tate filtration subgroup")
    p.add_argument("--field", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    _output_options(p)
    p.set_defaults(func=cmd_filtration)

    p = sub.add_parser("graded", help="graded piece F^n/F^(n+1)")
    p.add_argument("--field", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    _output_options(p)
    p.set_defaults(func=cmd_graded)

    p = sub.add_parser("convergence", help="separatedness of the filtration")
    p.add_argument("--field", required=True)
    p.add_argument("--cutoff", type=int, default=12)
    _output_options(p)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("moore", help="mod-ell Moore spectrum filtration")
    p.add_argument("--field", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _output_options(p)
    p.set_defaults(func=cmd_moore)

    p = sub.add_parser("transfer", help="trace transfer of a form, or property checks")
    p.add_argument("--ext", required=True, help='extension literal, e.g. "Fq(9)/Fq(3)"')
    p.add_argument("--form", help="form over the top field")
    p.add_argument("--check", choices=("projection",))
    p.add_argument("--rank-bound", type=int, default=4)
    _output_options(p)
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("check-all", help="run the acceptance suite")
    p.add_argument("--profile", choices=("quick", "full"))
    _output_options(p)
    p.set_defaults(func=cmd_check_all)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
