"""Section/retraction pairs between finite types.

``retract_to_fun0`` embeds any type into one of the form ``t -> N``, by
induction on the type, from the smaller constructions below. Binders are
compiled with the optimized abstraction: the plain one would rebuild the
closed library terms inside every body with ``S`` at each node, and the
nested compositions multiply that cost.
"""

from __future__ import annotations

from dataclasses import dataclass

from .build import ap, fst, lam, pair, snd
from .rewrite import lib
from .syntax import NAT, Arrow, FiniteType, Nat, Prod, Term
from .typecheck import TypeCheckError, type_of, zero_term

__all__ = [
    "Retraction", "retract_identity", "retract_base", "retract_compose", "retract_prod",
    "retract_postcompose", "retract_funpair", "retract_curry", "nat_prod_iso",
    "retract_to_fun0",
]


@dataclass(frozen=True)
class Retraction:
    """``section : source -> target`` and ``retraction : target -> source``."""

    source: FiniteType
    target: FiniteType
    section: Term
    retraction: Term

    def __post_init__(self):
        if type_of(self.section) != Arrow(self.source, self.target):
            raise TypeCheckError(f"section does not have type {Arrow(self.source, self.target)}")
        if type_of(self.retraction) != Arrow(self.target, self.source):
            raise TypeCheckError(
                f"retraction does not have type {Arrow(self.target, self.source)}")

    def embed(self, x: Term) -> Term:
        return ap(self.section, x)

    def project(self, y: Term) -> Term:
        return ap(self.retraction, y)


def retract_identity(ty: FiniteType) -> Retraction:
    ident = lam(ty, lambda x: x)
    return Retraction(ty, ty, ident, ident)


def retract_base() -> Retraction:
    """``N`` into ``N -> N`` by constant functions; back by evaluation at 0."""
    return Retraction(
        NAT, Arrow(NAT, NAT),
        lam((NAT, NAT), lambda x, y: x),
        lam(Arrow(NAT, NAT), lambda f: ap(f, zero_term(NAT))))


def retract_compose(a: Retraction, b: Retraction) -> Retraction:
    if a.target != b.source:
        raise TypeCheckError(f"cannot compose: {a.target} is not {b.source}")
    return Retraction(
        a.source, b.target,
        lam(a.source, lambda x: ap(b.section, ap(a.section, x))),
        lam(b.target, lambda y: ap(a.retraction, ap(b.retraction, y))))


def retract_prod(a: Retraction, b: Retraction) -> Retraction:
    src, tgt = Prod(a.source, b.source), Prod(a.target, b.target)
    return Retraction(
        src, tgt,
        lam(src, lambda p: pair(ap(a.section, fst(p)), ap(b.section, snd(p)))),
        lam(tgt, lambda p: pair(ap(a.retraction, fst(p)), ap(b.retraction, snd(p)))))


def retract_postcompose(gamma: FiniteType, a: Retraction) -> Retraction:
    """``gamma -> source`` into ``gamma -> target`` by composing on the left."""
    return Retraction(
        Arrow(gamma, a.source), Arrow(gamma, a.target),
        lam((Arrow(gamma, a.source), gamma), lambda x, y: ap(a.section, ap(x, y))),
        lam((Arrow(gamma, a.target), gamma), lambda x, y: ap(a.retraction, ap(x, y))))


def retract_funpair(alpha: FiniteType, beta: FiniteType,
                    gamma: FiniteType, delta: FiniteType) -> Retraction:
    """``(alpha -> beta) * (gamma -> delta)`` into ``alpha * gamma -> beta * delta``."""
    src = Prod(Arrow(alpha, beta), Arrow(gamma, delta))
    tgt = Arrow(Prod(alpha, gamma), Prod(beta, delta))
    section = lam((src, Prod(alpha, gamma)), lambda h, y: pair(
        ap(fst(h), fst(y)), ap(snd(h), snd(y))))
    retraction = lam(tgt, lambda k: pair(
        lam(alpha, lambda x: fst(ap(k, pair(x, zero_term(gamma))))),
        lam(gamma, lambda z: snd(ap(k, pair(zero_term(alpha), z))))))
    return Retraction(src, tgt, section, retraction)


def retract_curry(alpha: FiniteType, beta: FiniteType, gamma: FiniteType) -> Retraction:
    """``alpha -> beta -> gamma`` into ``alpha * beta -> gamma``."""
    src = Arrow(alpha, Arrow(beta, gamma))
    tgt = Arrow(Prod(alpha, beta), gamma)
    return Retraction(
        src, tgt,
        lam((src, Prod(alpha, beta)), lambda f, x: ap(f, fst(x), snd(x))),
        lam((tgt, alpha, beta), lambda g, x, y: ap(g, pair(x, y))))


def nat_prod_iso() -> Retraction:
    """``N * N`` and ``N`` through Cantor pairing; a bijection in both directions."""
    nn = Prod(NAT, NAT)
    return Retraction(
        nn, NAT,
        lam(nn, lambda p: ap(lib("pair_nat"), fst(p), snd(p))),
        lam(NAT, lambda n: pair(ap(lib("unpair_fst"), n), ap(lib("unpair_snd"), n))))


def retract_to_fun0(sigma: FiniteType) -> Retraction:
    """A retraction of ``sigma`` into some ``tau -> N``."""
    if isinstance(sigma, Nat):
        return retract_base()
    if isinstance(sigma, Prod):
        a, b = retract_to_fun0(sigma.left), retract_to_fun0(sigma.right)
        t0, t1 = a.target.dom, b.target.dom
        step = retract_compose(retract_prod(a, b), retract_funpair(t0, NAT, t1, NAT))
        return retract_compose(step, retract_postcompose(Prod(t0, t1), nat_prod_iso()))
    inner = retract_to_fun0(sigma.cod)
    lifted = retract_postcompose(sigma.dom, inner)
    return retract_compose(lifted, retract_curry(sigma.dom, inner.target.dom, NAT))
