"""Reduction under the combinator equations.

The six rules::

    K x y        -> x
    S x y z      -> x z (y z)
    FST (PAIR x y) -> x
    SND (PAIR x y) -> y
    REC x y 0    -> x
    REC x y (SUC m) -> y m (REC x y m)

``step`` performs one leftmost-outermost contraction on the tree.
``normalize`` runs a spine machine: weak-head reduction first (forcing the
pair argument of FST/SND and the numeral argument of REC), then the
arguments of the stuck spine. The rules are orthogonal, so both reach the
same normal form.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

from .build import ap, cond, lam, pair, fst, snd, rec, suc, num
from .syntax import NAT, App, Const, FiniteType, Kind, Prod, Term, numeral_value, spine
from .typecheck import type_of

__all__ = [
    "DEFAULT_FUEL", "Status", "NormalizeOutcome", "FuelExhausted", "NotNumeral",
    "Equality", "step", "normalize", "eval_nat", "term_eq_norm", "arith_library",
    "cond_term", "default_fuel", "lib",
]

DEFAULT_FUEL = 100_000

# nested forcing of REC/FST arguments recurses once per level
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))


def default_fuel() -> int:
    """Fuel from ``HYFT_FUEL`` if set, else ``DEFAULT_FUEL``."""
    value = os.environ.get("HYFT_FUEL")
    return int(value) if value else DEFAULT_FUEL


class Status(Enum):
    NORMAL_FORM = "NormalForm"
    FUEL_EXHAUSTED = "FuelExhausted"


@dataclass(frozen=True)
class NormalizeOutcome:
    result: Term
    steps: int
    status: Status


class FuelExhausted(RuntimeError):
    pass


class NotNumeral(ValueError):
    pass


class Equality(Enum):
    EQUAL = "Equal"
    DISTINCT = "Distinct"
    UNKNOWN = "Unknown"


def _rebuild(head: Term, args) -> Term:
    for a in args:
        head = App(head, a)
    return head


def _contract(head: Const, args: list) -> Optional[Term]:
    """Root contraction of ``head args`` without forcing anything."""
    kind, n = head.kind, len(args)
    if kind is Kind.K and n == 2:
        return args[0]
    if kind is Kind.S and n == 3:
        x, y, z = args
        return App(App(x, z), App(y, z))
    if kind in (Kind.FST, Kind.SND) and n == 1:
        ph, pargs = spine(args[0])
        if isinstance(ph, Const) and ph.kind is Kind.PAIR and len(pargs) == 2:
            return pargs[0] if kind is Kind.FST else pargs[1]
    if kind is Kind.REC and n == 3:
        x, y, m = args
        if m == Const(Kind.ZERO):
            return x
        if isinstance(m, App) and m.fun == Const(Kind.SUCC):
            return App(App(y, m.arg), App(App(App(head, x), y), m.arg))
    return None


def step(t: Term) -> Optional[Term]:
    """Contract the leftmost-outermost redex of ``t``; None if ``t`` is normal."""
    head, args = spine(t)
    if isinstance(head, Const):
        arity = {Kind.K: 2, Kind.S: 3, Kind.FST: 1, Kind.SND: 1, Kind.REC: 3}.get(head.kind)
        if arity is not None and len(args) >= arity:
            r = _contract(head, args[:arity])
            if r is not None:
                return _rebuild(r, args[arity:])
    for i, a in enumerate(args):
        r = step(a)
        if r is not None:
            return _rebuild(head, args[:i] + [r] + args[i + 1:])
    return None


class _Machine:
    def __init__(self, fuel: int):
        self.fuel = fuel
        self.steps = 0
        self.whnf_memo: dict[Term, Term] = {}
        self.nf_memo: dict[Term, Term] = {}

    def tick(self):
        self.steps += 1
        if self.steps > self.fuel:
            raise FuelExhausted(f"no normal form within {self.fuel} steps")

    def whnf(self, t: Term) -> Term:
        done = self.whnf_memo.get(t)
        if done is not None:
            return done
        head, args = spine(t)
        while isinstance(head, Const):
            kind, n = head.kind, len(args)
            # contractum as a head term plus extra arguments, built without the App spine
            if kind is Kind.K and n >= 2:
                new, extra, rest = args[0], (), args[2:]
            elif kind is Kind.S and n >= 3:
                x, y, z = args[:3]
                new, extra, rest = x, (z, App(y, z)), args[3:]
            elif kind in (Kind.FST, Kind.SND) and n >= 1:
                p = self.whnf(args[0])
                ph, pargs = spine(p)
                if not (isinstance(ph, Const) and ph.kind is Kind.PAIR and len(pargs) == 2):
                    args[0] = p
                    break
                new, extra, rest = pargs[0] if kind is Kind.FST else pargs[1], (), args[1:]
            elif kind is Kind.REC and n >= 3:
                m = self.whnf(args[2])
                mh, margs = spine(m)
                if isinstance(mh, Const) and mh.kind is Kind.ZERO and not margs:
                    new, extra = args[0], ()
                elif isinstance(mh, Const) and mh.kind is Kind.SUCC and len(margs) == 1:
                    x, y, p = args[0], args[1], margs[0]
                    new, extra = y, (p, App(App(App(head, x), y), p))
                else:
                    args[2] = m
                    break
                rest = args[3:]
            else:
                break
            self.tick()
            head, args = spine(new)
            args.extend(extra)
            args.extend(rest)
        result = _rebuild(head, args)
        self.whnf_memo[t] = result
        return result

    def nf(self, t: Term) -> Term:
        done = self.nf_memo.get(t)
        if done is not None:
            return done
        w = self.whnf(t)
        head, args = spine(w)
        if isinstance(head, Const) and head.kind is Kind.SUCC and len(args) == 1:
            # numerals: walk the SUC chain without recursing per level
            depth, cur = 1, self.whnf(args[0])
            while True:
                h, a = spine(cur)
                if isinstance(h, Const) and h.kind is Kind.SUCC and len(a) == 1:
                    depth += 1
                    cur = self.whnf(a[0])
                else:
                    break
            result = self.nf(cur)
            for _ in range(depth):
                result = App(head, result)
        else:
            result = _rebuild(head, [self.nf(a) for a in args])
        self.nf_memo[t] = result
        return result


def normalize(t: Term, fuel: Optional[int] = None) -> NormalizeOutcome:
    """Reduce ``t`` to normal form using at most ``fuel`` contractions.

    On exhaustion the outcome carries the input term unchanged.
    """
    machine = _Machine(default_fuel() if fuel is None else fuel)
    try:
        result = machine.nf(t)
    except FuelExhausted:
        return NormalizeOutcome(t, machine.steps, Status.FUEL_EXHAUSTED)
    return NormalizeOutcome(result, machine.steps, Status.NORMAL_FORM)


def eval_nat(t: Term, fuel: Optional[int] = None) -> int:
    out = normalize(t, fuel)
    if out.status is Status.FUEL_EXHAUSTED:
        raise FuelExhausted(f"no normal form within {out.steps - 1} steps")
    n = numeral_value(out.result)
    if n is None:
        raise NotNumeral(f"normal form is not a numeral: {out.result}")
    return n


def term_eq_norm(s: Term, t: Term, fuel: Optional[int] = None) -> Equality:
    a = normalize(s, fuel)
    b = normalize(t, fuel)
    if Status.FUEL_EXHAUSTED in (a.status, b.status):
        return Equality.UNKNOWN
    return Equality.EQUAL if a.result == b.result else Equality.DISTINCT


# ---------------------------------------------------------------------------
# Arithmetic library


@lru_cache(maxsize=None)
def cond_term(ty: FiniteType) -> Term:
    """``N -> ty -> ty -> ty``: first branch on 0, second otherwise."""
    return lam((NAT, ty, ty), lambda n, a, b: cond(n, a, b))


def arith_library() -> dict[str, Term]:
    """Closed arithmetic terms, all defined with REC.

    ``eq_nat`` yields 0 on equal arguments and 1 otherwise. ``pair_nat`` is
    Cantor pairing ``half((x+y)(x+y+1)) + x``; its projections walk the
    enumeration order one code at a time.
    """
    add = lam((NAT, NAT), lambda x, y: rec(x, lam((NAT, NAT), lambda m, z: suc(z)), y))
    mul = lam((NAT, NAT), lambda x, y: rec(num(0), lam((NAT, NAT), lambda m, z: ap(add, z, x)), y))
    pred = lam(NAT, lambda n: rec(num(0), lam((NAT, NAT), lambda m, z: m), n))
    monus = lam((NAT, NAT), lambda x, y: rec(x, lam((NAT, NAT), lambda m, z: ap(pred, z)), y))
    sg = lam(NAT, lambda n: cond(n, num(0), num(1)))
    eq_nat = lam((NAT, NAT), lambda x, y: ap(sg, ap(add, ap(monus, x, y), ap(monus, y, x))))
    nn = Prod(NAT, NAT)
    # halves(n) = (half n, half (n+1))
    halves = lam(NAT, lambda n: rec(
        pair(num(0), num(0)),
        lam((NAT, nn), lambda m, p: pair(snd(p), suc(fst(p)))),
        n))
    half = lam(NAT, lambda n: fst(ap(halves, n)))
    pair_nat = lam((NAT, NAT), lambda x, y: ap(
        add, ap(half, ap(mul, ap(add, x, y), suc(ap(add, x, y)))), x))
    # successor in Cantor order: (x, 0) -> (0, x+1), (x, y+1) -> (x+1, y)
    unpair = lam(NAT, lambda z: rec(
        pair(num(0), num(0)),
        lam((NAT, nn), lambda m, p: cond(
            snd(p), pair(num(0), suc(fst(p))), pair(suc(fst(p)), ap(pred, snd(p))))),
        z))
    unpair_fst = lam(NAT, lambda z: fst(ap(unpair, z)))
    unpair_snd = lam(NAT, lambda z: snd(ap(unpair, z)))
    lib = {
        "add": add, "mul": mul, "pred": pred, "monus": monus, "eq_nat": eq_nat,
        "cond": cond_term(NAT), "half": half, "pair_nat": pair_nat,
        "unpair_fst": unpair_fst, "unpair_snd": unpair_snd,
    }
    for t in lib.values():
        type_of(t)
    return lib


_LIBRARY: Optional[dict] = None


def lib(name: str) -> Term:
    """One library term, built once per process."""
    global _LIBRARY
    if _LIBRARY is None:
        _LIBRARY = arith_library()
    return _LIBRARY[name]
