"""Type assignment, substitution, canonical inhabitants and bracket abstraction."""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Optional

from .syntax import (
    App, Arrow, Const, Exists, Ext, ExtEq, Falsum, FiniteType, Forall, Formula,
    Imp, And, Or, Kind, NAT, Nat, PrimEq, Prod, Term, Var, free_vars, pretty,
)

__all__ = [
    "TypeCheckError", "combinator_type", "type_of", "zero_term", "substitute_term",
    "substitute_formula", "lambda_abstract", "check_formula", "fresh_name",
    "formula_names",
]

Context = Mapping[str, FiniteType]


class TypeCheckError(TypeError):
    pass


def combinator_type(kind: Kind, params) -> FiniteType:
    """Instantiate the type schema of a combinator."""
    return _schema(kind, tuple(params))


@lru_cache(maxsize=1 << 14)
def _schema(kind: Kind, params: tuple) -> FiniteType:
    expected = {Kind.K: 2, Kind.S: 3, Kind.PAIR: 2, Kind.FST: 2, Kind.SND: 2,
                Kind.ZERO: 0, Kind.SUCC: 0, Kind.REC: 1}[kind]
    if len(params) != expected:
        raise TypeCheckError(
            f"{kind.value} takes {expected} type parameters, got {len(params)}")
    if kind is Kind.K:
        r, s = params
        return Arrow(r, Arrow(s, r))
    if kind is Kind.S:
        r, s, t = params
        return Arrow(Arrow(r, Arrow(s, t)), Arrow(Arrow(r, s), Arrow(r, t)))
    if kind is Kind.PAIR:
        s, t = params
        return Arrow(s, Arrow(t, Prod(s, t)))
    if kind is Kind.FST:
        s, t = params
        return Arrow(Prod(s, t), s)
    if kind is Kind.SND:
        s, t = params
        return Arrow(Prod(s, t), t)
    if kind is Kind.ZERO:
        return NAT
    if kind is Kind.SUCC:
        return Arrow(NAT, NAT)
    (s,) = params
    return Arrow(s, Arrow(Arrow(NAT, Arrow(s, s)), Arrow(NAT, s)))


def _infer(t: Term) -> FiniteType:
    cached = t.__dict__.get("_ty")
    if cached is not None:
        return cached
    if isinstance(t, Var):
        ty = t.ty
    elif isinstance(t, Const):
        ty = combinator_type(t.kind, t.params)
    elif isinstance(t, App):
        f = _infer(t.fun)
        a = _infer(t.arg)
        if not isinstance(f, Arrow):
            raise TypeCheckError(
                f"{pretty(t.fun)} has type {pretty(f)} and is not a function")
        if f.dom != a:
            raise TypeCheckError(
                f"cannot apply {pretty(t.fun)} : {pretty(f)} to an argument of type {pretty(a)}")
        ty = f.cod
    else:
        raise TypeCheckError(f"not a term: {t!r}")
    object.__setattr__(t, "_ty", ty)
    return ty


def type_of(t: Term, ctx: Optional[Context] = None) -> FiniteType:
    """The type of ``t``.

    Variables carry their type. With ``ctx`` given, every free variable must
    also be bound there at the same type.
    """
    ty = _infer(t)
    if ctx is not None:
        for name, vty in free_vars(t):
            if name not in ctx:
                raise TypeCheckError(f"unbound variable {name}")
            if ctx[name] != vty:
                raise TypeCheckError(
                    f"variable {name} used at {pretty(vty)} but bound at {pretty(ctx[name])}")
    return ty


@lru_cache(maxsize=4096)
def zero_term(ty: FiniteType) -> Term:
    """Canonical closed inhabitant of ``ty``."""
    if isinstance(ty, Nat):
        return Const(Kind.ZERO)
    if isinstance(ty, Prod):
        return App(App(Const(Kind.PAIR, (ty.left, ty.right)), zero_term(ty.left)),
                   zero_term(ty.right))
    if isinstance(ty, Arrow):
        return App(Const(Kind.K, (ty.cod, ty.dom)), zero_term(ty.cod))
    raise TypeCheckError(f"not a type: {ty!r}")


def substitute_term(t: Term, x: str, s: Term) -> Term:
    """Replace every occurrence of the variable named ``x`` in ``t`` by ``s``."""
    sty = _infer(s)
    memo: dict[int, Term] = {}

    def go(u: Term) -> Term:
        key = id(u)
        if key in memo:
            return memo[key]
        if isinstance(u, Var):
            if u.name == x:
                if u.ty != sty:
                    raise TypeCheckError(
                        f"cannot substitute a term of type {pretty(sty)} for {x} : {pretty(u.ty)}")
                r = s
            else:
                r = u
        elif isinstance(u, App):
            f, a = go(u.fun), go(u.arg)
            r = u if (f is u.fun and a is u.arg) else App(f, a)
        else:
            r = u
        memo[key] = r
        return r

    return go(t)


def formula_names(f: Formula) -> set[str]:
    """All variable names occurring in ``f``, bound or free."""
    if isinstance(f, (PrimEq, ExtEq)):
        return {n for n, _ in free_vars(f.lhs) | free_vars(f.rhs)}
    if isinstance(f, Ext):
        return {n for n, _ in free_vars(f.term)}
    if isinstance(f, Falsum):
        return set()
    if isinstance(f, (And, Or, Imp)):
        return formula_names(f.left) | formula_names(f.right)
    if isinstance(f, (Forall, Exists)):
        return {f.var} | formula_names(f.body)
    raise TypeError(f)


def fresh_name(base: str, avoid) -> str:
    """``base`` itself if unused, else ``base`` followed by the first free counter."""
    if base not in avoid:
        return base
    stem = base.rstrip("0123456789") or base
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def substitute_formula(f: Formula, x: str, s: Term) -> Formula:
    """Capture-avoiding substitution of ``s`` for the free variable ``x``."""
    if isinstance(f, PrimEq):
        return PrimEq(f.ty, substitute_term(f.lhs, x, s), substitute_term(f.rhs, x, s))
    if isinstance(f, ExtEq):
        return ExtEq(f.ty, substitute_term(f.lhs, x, s), substitute_term(f.rhs, x, s))
    if isinstance(f, Ext):
        return Ext(f.ty, substitute_term(f.term, x, s))
    if isinstance(f, Falsum):
        _infer(s)
        return f
    if isinstance(f, (And, Or, Imp)):
        return type(f)(substitute_formula(f.left, x, s), substitute_formula(f.right, x, s))
    if isinstance(f, (Forall, Exists)):
        if f.var == x:
            return f
        if x not in {n for n, _ in free_vars(f.body)}:
            return f
        var, body = f.var, f.body
        s_names = {n for n, _ in free_vars(s)}
        if var in s_names:
            new = fresh_name(var, s_names | formula_names(body) | {x})
            body = substitute_formula(body, var, Var(new, f.ty))
            var = new
        return type(f)(var, f.ty, substitute_formula(body, x, s))
    raise TypeError(f)


def lambda_abstract(x: str, ty: FiniteType, t: Term, optimized: bool = False) -> Term:
    """Compile ``\\x:ty. t`` into combinators.

    By default the four textbook clauses are applied verbatim (identity as
    ``S K K``, constants and other variables under ``K``, applications under
    ``S``). ``optimized`` adds the K-shortcut for subterms not mentioning ``x``
    and eta-contraction.
    """
    _infer(t)
    memo: dict[int, Term] = {}

    def mentions(u: Term) -> bool:
        return (x, ty) in free_vars(u)

    def go(u: Term) -> Term:
        key = id(u)
        if key in memo:
            return memo[key]
        uty = _infer(u)
        if isinstance(u, Var) and u.name == x:
            if u.ty != ty:
                raise TypeCheckError(
                    f"{x} is bound at {pretty(ty)} but used at {pretty(u.ty)}")
            r = App(App(Const(Kind.S, (ty, Arrow(ty, ty), ty)),
                        Const(Kind.K, (ty, Arrow(ty, ty)))),
                    Const(Kind.K, (ty, ty)))
        elif isinstance(u, (Var, Const)) or (optimized and not mentions(u)):
            r = App(Const(Kind.K, (uty, ty)), u)
        elif (optimized and isinstance(u.arg, Var) and u.arg.name == x
              and u.arg.ty == ty and not mentions(u.fun)):
            r = u.fun
        else:
            fty = _infer(u.fun)
            r = App(App(Const(Kind.S, (ty, fty.dom, fty.cod)), go(u.fun)), go(u.arg))
        memo[key] = r
        return r

    return go(t)


def check_formula(f: Formula, ctx: Optional[Context] = None, closed: bool = False) -> None:
    """Raise ``TypeCheckError`` unless ``f`` is well-typed.

    Free variables must agree with ``ctx`` when it is given; ``closed``
    forbids them altogether.
    """

    def var_ok(name: str, vty: FiniteType, env: dict):
        if name in env:
            if env[name] != vty:
                raise TypeCheckError(
                    f"{name} is bound at {pretty(env[name])} but used at {pretty(vty)}")
        elif closed:
            raise TypeCheckError(f"free variable {name} in a closed formula")
        elif ctx is not None:
            if name not in ctx:
                raise TypeCheckError(f"unbound variable {name}")
            if ctx[name] != vty:
                raise TypeCheckError(
                    f"variable {name} used at {pretty(vty)} but bound at {pretty(ctx[name])}")

    def term_at(t: Term, ty: FiniteType, env: dict):
        actual = _infer(t)
        if actual != ty:
            raise TypeCheckError(
                f"{pretty(t)} has type {pretty(actual)}, expected {pretty(ty)}")
        for name, vty in free_vars(t):
            var_ok(name, vty, env)

    def go(g: Formula, env: dict):
        if isinstance(g, (PrimEq, ExtEq)):
            term_at(g.lhs, g.ty, env)
            term_at(g.rhs, g.ty, env)
        elif isinstance(g, Ext):
            term_at(g.term, g.ty, env)
        elif isinstance(g, Falsum):
            pass
        elif isinstance(g, (And, Or, Imp)):
            go(g.left, env)
            go(g.right, env)
        elif isinstance(g, (Forall, Exists)):
            inner = dict(env)
            inner[g.var] = g.ty
            go(g.body, inner)
        else:
            raise TypeCheckError(f"not a formula: {g!r}")

    go(f, {})
