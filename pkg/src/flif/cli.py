"""``flifc``: command line front end.

Exit status is 0 on success, 1 for semantic errors (not executable, not
io-disjoint, schema problems) and 2 for unreadable input (files, JSON,
syntax). Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import io_profile, is_io_disjoint
from .crosscheck import run_checks
from .dbfile import load_bindings, load_database, load_mapping, row_json, rows_table
from .errors import FlifError, InputDomainMismatch, InputError, NotExecutable
from .evaluate import ValuationSet, eval_exfo, eval_flif, eval_flif_v
from .model import Instance
from .plan import compile_plan, eval_plan, node_count, parse_plan, print_plan
from .syntax.flif import parse_flif, print_flif, validate, variables
from .syntax.fo import free_vars, parse_fo, print_fo, validate_fo
from .translate import (
    default_renaming,
    exfo_to_flif,
    flif_to_exfo_3n,
    flifio_to_exfo,
    rewrite_io_disjoint,
)


def _text(args) -> str:
    if args.expr is not None:
        return args.expr
    if args.file is not None:
        return Path(args.file).read_text(encoding="utf-8")
    raise InputError("give an expression with -e or a file with -f")


def _vars(arg: str | None) -> list[str] | None:
    if arg is None:
        return None
    return [v.strip() for v in arg.split(",") if v.strip()]


def _database(args, required: bool = True) -> Instance | None:
    if args.database is None:
        if required:
            raise InputError("this command needs a database (-d FILE)")
        return None
    return load_database(args.database)


def _emit_rows(result: ValuationSet, fmt: str, out) -> None:
    rows = result.sorted()
    if fmt == "ndjson":
        for r in rows:
            print(row_json(r), file=out)
    else:
        print(rows_table(result.schema, rows), file=out)


def _single(bindings: list, what: str = "--in"):
    if len(bindings) != 1:
        raise InputError(f"{what} must hold exactly one valuation here")
    return bindings[0]


# -- commands -----------------------------------------------------------------


def cmd_analyze(args, out) -> int:
    alpha = parse_flif(_text(args))
    D = _database(args, required=False)
    if D is not None:
        validate(alpha, D.schema)
    prof = io_profile(alpha)
    verdict = is_io_disjoint(alpha)
    if args.format == "ndjson":
        doc = {
            "inputs": sorted(prof.inputs),
            "outputs": sorted(prof.outputs),
            "vars": sorted(prof.vars),
            "io_disjoint": verdict.ok,
        }
        if not verdict:
            doc["witness"] = print_flif(verdict.witness)
            doc["reason"] = verdict.reason
        print(json.dumps(doc), file=out)
        return 0
    print(f"{prof} io-disjoint: {'yes' if verdict else 'no'}", file=out)
    if not verdict:
        print(f"witness: {print_flif(verdict.witness)} ({verdict.reason})", file=out)
    return 0


def cmd_eval(args, out) -> int:
    alpha = parse_flif(_text(args))
    D = _database(args)
    bindings = load_bindings(args.inp) if args.inp else [{}]
    V = _vars(args.vars)
    if V is not None:
        nu = _single(bindings)
        result = eval_flif_v(alpha, V, D, nu)
    else:
        prof = io_profile(alpha)
        rows = set()
        for nu in bindings:
            if set(nu) != prof.inputs:
                raise InputDomainMismatch(
                    f"input must bind exactly {sorted(prof.inputs)}, got {sorted(nu)}"
                )
            rows |= eval_flif(alpha, D, nu).rows
        result = ValuationSet(prof.vars, rows)
    _emit_rows(result, args.format, out)
    return 0


def cmd_eval_fo(args, out) -> int:
    phi = parse_fo(_text(args))
    D = _database(args)
    bindings = load_bindings(args.inp) if args.inp else [{}]
    V = _vars(args.vars)
    rows, schema = set(), None
    for nu in bindings:
        bound = set(V) if V is not None else set(nu)
        result = eval_exfo(phi, bound, D, nu)
        schema = result.schema
        rows |= result.rows
    if schema is None:
        schema = set(V or ()) | free_vars(phi)
    _emit_rows(ValuationSet(schema, rows), args.format, out)
    return 0


def cmd_translate(args, out) -> int:
    text = _text(args)
    D = _database(args, required=False)
    if args.mode == "fo2flif":
        phi = parse_fo(text)
        if D is not None:
            validate_fo(phi, D.schema)
        V = _vars(args.vars) or []
        tr = exfo_to_flif(phi, V)
        print(print_flif(tr.expr), file=out)
        return 0
    alpha = parse_flif(text)
    if D is not None:
        validate(alpha, D.schema)
    if args.mode == "flif2fo3n":
        vx = _vars(args.vars) or sorted(variables(alpha))
        print(print_fo(flif_to_exfo_3n(alpha, vx)), file=out)
    else:
        print(print_fo(flifio_to_exfo(alpha)), file=out)
    return 0


def cmd_rewrite(args, out) -> int:
    alpha = parse_flif(_text(args))
    D = _database(args, required=False)
    if D is not None:
        validate(alpha, D.schema)
    rho = load_mapping(args.rho) if args.rho else default_renaming(alpha)
    beta = rewrite_io_disjoint(alpha, rho, _vars(args.avoid) or ())
    if args.format == "ndjson":
        print(json.dumps({"expr": print_flif(beta), "rho": rho}, ensure_ascii=False), file=out)
    else:
        print(print_flif(beta), file=out)
    return 0


def cmd_compile(args, out) -> int:
    alpha = parse_flif(_text(args))
    D = _database(args, required=False)
    if D is not None:
        validate(alpha, D.schema)
    Z = _vars(args.vars)
    plan = compile_plan(alpha, Z)
    text = print_plan(plan)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
        print(f"wrote {args.output} ({node_count(plan)} nodes)", file=sys.stderr)
    else:
        print(text, file=out)
    return 0


def cmd_run_plan(args, out) -> int:
    if args.plan is None:
        raise InputError("run-plan needs --plan FILE")
    plan = parse_plan(Path(args.plan).read_text(encoding="utf-8"))
    D = _database(args)
    if not args.inp:
        raise InputError("run-plan needs --in with the input relation")
    rows = load_bindings(args.inp)
    V = _vars(args.vars)
    if V is None:
        if not rows:
            raise InputError("empty input relation: give its schema with --vars")
        V = sorted(rows[0])
    _emit_rows(eval_plan(plan, D, ValuationSet(V, rows)), args.format, out)
    return 0


def cmd_check(args, out) -> int:
    alpha = parse_flif(_text(args))
    D = _database(args)
    validate(alpha, D.schema)
    results = run_checks(alpha, D, seed=args.seed)
    failed = [r for r in results if not r.ok]
    for r in results:
        print(r.line(), file=out if r.ok else sys.stderr)
    if failed:
        print(f"{len(failed)} of {len(results)} cross-checks failed", file=out)
        return 1
    print(f"all {len(results)} cross-checks passed", file=out)
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "eval": cmd_eval,
    "eval-fo": cmd_eval_fo,
    "translate": cmd_translate,
    "rewrite": cmd_rewrite,
    "compile": cmd_compile,
    "run-plan": cmd_run_plan,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flifc", description="FLIF analysis, evaluation and compilation")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, expr=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-d", "--database", help="database JSON file")
        if expr:
            g = p.add_mutually_exclusive_group()
            g.add_argument("-e", "--expr", help="expression text")
            g.add_argument("-f", "--file", help="file holding the expression")
        p.add_argument("--format", choices=["table", "ndjson"], default="table")
        return p

    add("analyze", "input/output variables and io-disjointness")
    p = add("eval", "evaluate an FLIF expression")
    p.add_argument("--in", dest="inp", help="bindings: JSON text or file")
    p.add_argument("--vars", help="evaluate over this variable set instead of the inputs")
    p = add("eval-fo", "evaluate an executable FO formula")
    p.add_argument("--in", dest="inp", help="bindings: JSON text or file")
    p.add_argument("--vars", help="bound variables (default: those in --in)")
    p = add("translate", "translate between FLIF and executable FO")
    p.add_argument("--mode", choices=["fo2flif", "flif2fo3n", "flifio2fo"], required=True)
    p.add_argument("--vars", help="bound variables (fo2flif) or ordered variable list (flif2fo3n)")
    p = add("rewrite", "rewrite into io-disjoint form")
    p.add_argument("--rho", help="output renaming: JSON text or file (default: fresh names)")
    p.add_argument("--avoid", help="variables the intermediate outputs must avoid")
    p = add("compile", "compile an io-disjoint expression to a plan")
    p.add_argument("--vars", help="input relation schema (default: the input variables)")
    p.add_argument("-o", "--output", help="write the plan here instead of standard output")
    p = add("run-plan", "evaluate a plan file", expr=False)
    p.add_argument("--plan", help="plan file")
    p.add_argument("--in", dest="inp", help="input relation: JSON text or file")
    p.add_argument("--vars", help="input relation schema (needed when it is empty)")
    p = add("check", "cross-check every engine on one expression")
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except NotExecutable as exc:
        print(f"flifc: not executable: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"flifc: {exc}", file=sys.stderr)
        return 2
    except FlifError as exc:
        print(f"flifc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"flifc: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
