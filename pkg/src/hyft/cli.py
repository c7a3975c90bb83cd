"""Command-line front end.

    hyft eval "FST (PAIR 7 1)"
    hyft types --alpha "N->N"
    hyft translate --mode ee "ext(x:N)"

Exit status: 0 on success, 1 for bad input (syntax, typing, fuel), 2 when
an internal invariant breaks.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from typing import Optional

from .alpha import AlphaVarMap, alpha_formula, cext_witness, type_minus, type_plus
from .hybrid import (
    StarError, cext_axiom, cext_witness_type, ee_translate, ext_axiom, ext_prime_axiom,
    hybrid_axioms, mr_translate, star_embed, star_translate, unfold_eq,
)
from .model import DomainSpec, ModelError, eval_formula
from .retract import retract_to_fun0
from .rewrite import FuelExhausted, NotNumeral, Status, default_fuel, eval_nat, normalize
from .syntax import (
    Formula, ParseError, Term, free_vars, parse_formula, parse_term, parse_type, pretty,
    to_json,
)
from .typecheck import TypeCheckError, check_formula, substitute_formula, substitute_term, type_of

__all__ = ["main", "build_parser", "load_declarations", "Declarations"]


class InputError(Exception):
    """Bad user input; reported with exit status 1."""


def _show(x) -> str:
    return pretty(x, compact=True)


def _emit(args, text: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, ensure_ascii=False, sort_keys=True))
    else:
        print(text)


def _read_input(args) -> str:
    if args.file and args.expr is not None:
        raise InputError("give either an inline expression or --file, not both")
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                return "\n".join(_COMMENT.sub("", line) for line in fh).strip()
        except OSError as exc:
            raise InputError(str(exc)) from exc
    if args.expr is None:
        raise InputError("missing input expression")
    return args.expr


# ---------------------------------------------------------------------------
# Declaration files

_DECL = re.compile(r"^(?P<name>[A-Za-z][A-Za-z0-9_]*)\s*:\s*(?P<type>[^=]+?)\s*=\s*(?P<body>.+)$")
_GOAL = re.compile(r"^goal\s+(?P<name>[A-Za-z][A-Za-z0-9_]*)\s*=\s*(?P<body>.+)$")
_COMMENT = re.compile(r"--.*$")


@dataclass
class Declarations:
    terms: dict[str, Term]
    goals: dict[str, Formula]


def load_declarations(text: str, source: str = "<input>") -> Declarations:
    """Parse ``name : Type = term`` and ``goal name = formula`` lines.

    Later lines may use earlier names; they are replaced by their
    definitions. ``--`` starts a comment.
    """
    terms: dict[str, Term] = {}
    goals: dict[str, Formula] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _COMMENT.sub("", raw).strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        ctx = {name: type_of(t) for name, t in terms.items()}
        try:
            goal = _GOAL.match(line)
            if goal:
                name = goal["name"]
                if name in goals:
                    raise InputError(f"{where}: goal {name} defined twice")
                f = parse_formula(goal["body"], ctx)
                for dname, body in terms.items():
                    f = substitute_formula(f, dname, body)
                check_formula(f)
                goals[name] = f
                continue
            decl = _DECL.match(line)
            if not decl:
                raise InputError(f"{where}: expected 'name : Type = term' or 'goal name = formula'")
            name = decl["name"]
            if name in terms:
                raise InputError(f"{where}: {name} defined twice")
            ty = parse_type(decl["type"])
            t = parse_term(decl["body"], ctx, expected=ty)
            for dname, body in terms.items():
                if any(n == dname for n, _ in free_vars(t)):
                    t = substitute_term(t, dname, body)
            if type_of(t) != ty:
                raise TypeCheckError(f"{name} has type {_show(type_of(t))}, declared {_show(ty)}")
            terms[name] = t
        except ParseError as exc:
            raise InputError(f"{where}: {exc}") from exc
        except TypeCheckError as exc:
            raise InputError(f"{where}: {exc}") from exc
    return Declarations(terms, goals)


# ---------------------------------------------------------------------------
# Commands


def cmd_check(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc
    decls = load_declarations(text, args.file)
    report = []
    lines = []
    for name, t in decls.terms.items():
        report.append({"name": name, "kind": "term", "type": to_json(type_of(t))})
        lines.append(f"ok {name} : {_show(type_of(t))}")
    spec = DomainSpec(nat_bound=args.nat_bound)
    for name, f in decls.goals.items():
        entry = {"name": name, "kind": "goal"}
        line = f"ok goal {name}"
        if args.model:
            if free_vars(f):
                verdict = "skipped (open formula)"
            else:
                verdict = str(eval_formula(ee_translate(f), spec))
            entry["model"] = verdict
            line += f": {verdict}"
        report.append(entry)
        lines.append(line)
    _emit(args, "\n".join(lines), {"declarations": report})
    return 0


def cmd_normalize(args) -> int:
    t = parse_term(_read_input(args))
    out = normalize(t, args.fuel)
    status = "normal form" if out.status is Status.NORMAL_FORM else "fuel exhausted"
    _emit(args, f"{_show(out.result)}\n-- {out.steps} steps, {status}",
          {"term": to_json(out.result), "steps": out.steps, "status": out.status.value})
    return 0 if out.status is Status.NORMAL_FORM else 1


def cmd_eval(args) -> int:
    t = parse_term(_read_input(args))
    if free_vars(t):
        raise InputError("eval needs a closed term")
    if type_of(t) != parse_type("N"):
        raise InputError(f"eval needs a term of type N, got {_show(type_of(t))}")
    n = eval_nat(t, args.fuel)
    _emit(args, str(n), {"value": n})
    return 0


def cmd_translate(args) -> int:
    f = parse_formula(_read_input(args))
    check_formula(f)
    payload: dict = {"mode": args.mode}
    if args.mode == "star":
        if args.guard:
            _, out = star_embed(f)
        else:
            out = star_translate(f)
    elif args.mode == "ee":
        out = ee_translate(f)
    elif args.mode == "unfold-eq":
        out = unfold_eq(f)
    elif args.mode == "alpha":
        vmap = AlphaVarMap()
        out = alpha_formula(f, vmap)
        payload["variables"] = {f"{n}:{_show(ty)}": target for (n, ty), target in vmap.items()}
    else:
        ty, out = mr_translate(args.realizer, f)
        payload["realizer"] = {"name": args.realizer, "type": to_json(ty)}
        payload["formula"] = to_json(out)
        _emit(args, f"{args.realizer} : {_show(ty)}\n{_show(out)}", payload)
        return 0
    payload["formula"] = to_json(out)
    _emit(args, _show(out), payload)
    return 0


def cmd_types(args) -> int:
    ty = parse_type(args.type)
    if args.alpha:
        plus, minus = type_plus(ty), type_minus(ty)
        _emit(args, f"plus: {_show(plus)}, minus: {_show(minus)}",
              {"plus": to_json(plus), "minus": to_json(minus)})
    else:
        _emit(args, _show(ty), {"type": to_json(ty)})
    return 0


def cmd_axioms(args) -> int:
    sigma, tau = parse_type(args.sigma), parse_type(args.tau)
    if args.schema == "hybrid":
        axioms = hybrid_axioms(sigma, tau, include_eq_ext=args.with_eq_ext)
    elif args.schema == "ext":
        axioms = [ext_axiom(sigma, tau)]
    elif args.schema == "ext-prime":
        axioms = [ext_prime_axiom(sigma, tau)]
    else:
        axioms = [cext_axiom(sigma, tau)]
    for ax in axioms:
        check_formula(ax, closed=True)
    _emit(args, "\n".join(_show(ax) for ax in axioms),
          {"axioms": [to_json(ax) for ax in axioms]})
    return 0


def cmd_retract(args) -> int:
    r = retract_to_fun0(parse_type(args.type))
    _emit(args,
          f"source: {_show(r.source)}\ntarget: {_show(r.target)}\n"
          f"section: {_show(r.section)}\nretraction: {_show(r.retraction)}",
          {"source": to_json(r.source), "target": to_json(r.target),
           "section": to_json(r.section), "retraction": to_json(r.retraction)})
    return 0


def cmd_witness_cext(args) -> int:
    sigma, tau = parse_type(args.sigma), parse_type(args.tau)
    z = cext_witness(sigma, tau)
    expected = type_plus(cext_witness_type(sigma, tau))
    if type_of(z) != expected:
        raise AssertionError("witness does not have the translated type")
    _emit(args, f"{_show(z)}\n-- typechecks at {_show(expected)}",
          {"term": to_json(z), "type": to_json(expected)})
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyft", description="Finite-type combinatory arithmetic and its translations.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p):
        p.add_argument("expr", nargs="?", help="inline expression")
        p.add_argument("--file", help="read the expression from a file")

    p = sub.add_parser("check", help="typecheck a declaration file")
    p.add_argument("file")
    p.add_argument("--model", action="store_true",
                   help="also evaluate closed goals in the bounded model")
    p.add_argument("--nat-bound", type=int, default=8)
    p.set_defaults(run=cmd_check)

    for name, run, help_text in [("normalize", cmd_normalize, "print the normal form"),
                                 ("eval", cmd_eval, "evaluate a closed term of type N")]:
        p = sub.add_parser(name, help=help_text)
        with_input(p)
        p.add_argument("--fuel", type=int, default=None,
                       help="step limit (default: HYFT_FUEL or 100000)")
        p.set_defaults(run=run)

    p = sub.add_parser("translate", help="translate a formula")
    with_input(p)
    p.add_argument("--mode", required=True, choices=["star", "ee", "unfold-eq", "alpha", "mr"])
    p.add_argument("--guard", action="store_true",
                   help="star mode: prepend ext guards for the free variables")
    p.add_argument("--realizer", default="r", help="mr mode: name of the realizer variable")
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser("types", help="print a type, or its plus/minus types")
    p.add_argument("--alpha", action="store_true")
    p.add_argument("type")
    p.set_defaults(run=cmd_types)

    p = sub.add_parser("axioms", help="print instances of an axiom schema")
    p.add_argument("--schema", required=True, choices=["hybrid", "ext", "ext-prime", "cext"])
    p.add_argument("--sigma", default="N")
    p.add_argument("--tau", default="N")
    p.add_argument("--with-eq-ext", action="store_true",
                   help="hybrid: include x = y -> ext(x) -> ext(y)")
    p.set_defaults(run=cmd_axioms)

    p = sub.add_parser("retract", help="retraction of a type into some t -> N")
    p.add_argument("type")
    p.set_defaults(run=cmd_retract)

    p = sub.add_parser("witness-cext", help="print the converse-extensionality witness")
    p.add_argument("--sigma", default="N")
    p.add_argument("--tau", default="N")
    p.set_defaults(run=cmd_witness_cext)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    try:
        sys.stdout.reconfigure(encoding="utf-8", line_buffering=True)
    except AttributeError:
        pass
    args = build_parser().parse_args(argv)
    if getattr(args, "fuel", None) is None and hasattr(args, "fuel"):
        args.fuel = default_fuel()
    try:
        return args.run(args)
    except (InputError, ParseError, TypeCheckError, StarError, ModelError,
            FuelExhausted, NotNumeral) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # invariant breach
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
