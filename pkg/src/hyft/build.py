"""Small combinators for writing terms from Python.

``lam`` takes a Python function and compiles the binder away, so library
terms can be written close to their lambda-notation definitions::

    add = lam((NAT, NAT), lambda x, y: rec(x, lam((NAT, NAT), lambda m, z: suc(z)), y))
"""

from __future__ import annotations

import itertools
from typing import Callable, Sequence, Union

from .syntax import NAT, App, Arrow, Const, FiniteType, Kind, Prod, Term, Var, numeral
from .typecheck import TypeCheckError, lambda_abstract, type_of

_names = itertools.count()


def lam(tys: Union[FiniteType, Sequence[FiniteType]], body: Callable[..., Term],
        optimized: bool = True) -> Term:
    if isinstance(tys, FiniteType):
        tys = (tys,)
    # '%' cannot occur in parsed identifiers, so binder names never clash
    vs = [Var(f"%{next(_names)}", ty) for ty in tys]
    t = body(*vs)
    for v in reversed(vs):
        t = lambda_abstract(v.name, v.ty, t, optimized=optimized)
    return t


def ap(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    type_of(f)
    return f


def _prod(t: Term) -> Prod:
    ty = type_of(t)
    if not isinstance(ty, Prod):
        raise TypeCheckError(f"expected a pair, got a term of type {ty}")
    return ty


def pair(a: Term, b: Term) -> Term:
    return App(App(Const(Kind.PAIR, (type_of(a), type_of(b))), a), b)


def fst(p: Term) -> Term:
    ty = _prod(p)
    return App(Const(Kind.FST, (ty.left, ty.right)), p)


def snd(p: Term) -> Term:
    ty = _prod(p)
    return App(Const(Kind.SND, (ty.left, ty.right)), p)


def suc(n: Term) -> Term:
    return App(Const(Kind.SUCC), n)


def num(n: int) -> Term:
    return numeral(n)


def rec(base: Term, step: Term, n: Term) -> Term:
    return ap(Const(Kind.REC, (type_of(base),)), base, step, n)


def cond(n: Term, if_zero: Term, otherwise: Term) -> Term:
    """``if_zero`` when ``n`` is 0, else ``otherwise``; by recursion on ``n``."""
    ty = type_of(if_zero)
    return rec(if_zero, lam((NAT, ty), lambda m, z: otherwise), n)


def const_fn(dom: FiniteType, value: Term) -> Term:
    return App(Const(Kind.K, (type_of(value), dom)), value)


def identity(ty: FiniteType) -> Term:
    return lambda_abstract("x", ty, Var("x", ty))


def compose(g: Term, f: Term) -> Term:
    """``\\x. g (f x)``."""
    fty = type_of(f)
    assert isinstance(fty, Arrow)
    return lam(fty.dom, lambda x: ap(g, ap(f, x)))
