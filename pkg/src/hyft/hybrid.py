"""The hybrid language: axiom schemas and the translations into and out of it.

* ``hybrid_axioms`` and the EXT / EXT' / CEXT schemas generate closed
  formulas at given types.
* ``star_translate`` embeds extensional arithmetic: primitive equality
  becomes extensional equality and quantifiers are relativized to ``ext``.
* ``ee_translate`` eliminates ``ext`` and ``=`` by their inductive
  definitions, landing in the pure intensional language.
* ``exteq_unfold`` expands only ``=`` using the defining equivalences.
* ``mr_translate`` is modified realizability with trivial clauses for the
  two new atoms.
"""

from __future__ import annotations

from typing import Optional

from .build import ap, fst, snd
from .syntax import (
    NAT, And, App, Arrow, Const, Exists, Ext, ExtEq, FALSUM, Falsum, FiniteType,
    Forall, Formula, Imp, Kind, Nat, Or, PrimEq, Prod, Term, Var, arrows, free_vars,
)
from .typecheck import fresh_name, formula_names, substitute_formula, type_of

__all__ = [
    "top", "neg", "iff", "conj", "forall_ext", "exists_ext",
    "hybrid_axioms", "ext_axiom", "ext_prime_axiom", "cext_axiom", "cext_witness_type",
    "star_translate", "star_embed", "ext_def_formula", "exteq_def_formula",
    "ee_translate", "exteq_unfold", "unfold_eq", "mr_translate", "StarError",
    "has_hybrid_atoms", "quantifiers_guarded",
]


class StarError(ValueError):
    """Raised when the star translation is given a formula with ext or = atoms."""


def top() -> Formula:
    """Truth, as the atom ``0 == 0``."""
    return PrimEq(NAT, Const(Kind.ZERO), Const(Kind.ZERO))


def neg(f: Formula) -> Formula:
    return Imp(f, FALSUM)


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def conj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def imps(*fs: Formula) -> Formula:
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Imp(f, out)
    return out


def forall_ext(x: Var, body: Formula) -> Formula:
    return Forall(x.name, x.ty, Imp(Ext(x.ty, x), body))


def exists_ext(x: Var, body: Formula) -> Formula:
    return Exists(x.name, x.ty, And(Ext(x.ty, x), body))


def _forall(vs, body: Formula) -> Formula:
    for v in reversed(vs):
        body = Forall(v.name, v.ty, body)
    return body


def _avoid(*terms: Term) -> set:
    return {n for t in terms for n, _ in free_vars(t)}


def _var(base: str, ty: FiniteType, avoid: set) -> Var:
    name = fresh_name(base, avoid)
    avoid.add(name)
    return Var(name, ty)


# ---------------------------------------------------------------------------
# Axiom schemas


def hybrid_axioms(sigma: FiniteType, tau: FiniteType,
                  include_eq_ext: bool = False) -> list[Formula]:
    """The hybrid axioms instantiated at ``sigma`` and ``tau``.

    ``x = y -> ext(x) -> ext(y)`` is left out unless ``include_eq_ext``.
    Combinators get one ``ext`` axiom each, at parameters built from
    ``sigma`` and ``tau``.
    """
    x0, y0 = Var("x", NAT), Var("y", NAT)
    st = Prod(sigma, tau)
    xp, yp = Var("x", st), Var("y", st)
    ft = Arrow(sigma, tau)
    f, g = Var("f", ft), Var("g", ft)
    x, y = Var("x", sigma), Var("y", sigma)
    axioms = [
        _forall([x0, y0], iff(ExtEq(NAT, x0, y0), PrimEq(NAT, x0, y0))),
        Forall("x", NAT, Ext(NAT, x0)),
        _forall([xp, yp], iff(
            ExtEq(st, xp, yp),
            And(ExtEq(sigma, fst(xp), fst(yp)), ExtEq(tau, snd(xp), snd(yp))))),
        Forall("x", st, iff(Ext(st, xp), And(Ext(sigma, fst(xp)), Ext(tau, snd(xp))))),
        _forall([f, g], iff(
            ExtEq(ft, f, g),
            forall_ext(x, ExtEq(tau, App(f, x), App(g, x))))),
        _forall([f, x], imps(Ext(ft, f), Ext(sigma, x), Ext(tau, App(f, x)))),
        _forall([x, y], imps(PrimEq(sigma, x, y), Ext(sigma, x), Ext(sigma, y))),
    ]
    if include_eq_ext:
        axioms.append(_forall([x, y], imps(ExtEq(sigma, x, y), Ext(sigma, x), Ext(sigma, y))))
    combinators = [
        Const(Kind.K, (sigma, tau)),
        Const(Kind.S, (sigma, tau, sigma)),
        Const(Kind.PAIR, (sigma, tau)),
        Const(Kind.FST, (sigma, tau)),
        Const(Kind.SND, (sigma, tau)),
        Const(Kind.ZERO),
        Const(Kind.SUCC),
        Const(Kind.REC, (sigma,)),
    ]
    axioms.extend(Ext(type_of(c), c) for c in combinators)
    return axioms


def ext_axiom(sigma: FiniteType, tau: FiniteType) -> Formula:
    """EXT: extensional functions preserve extensional equality of extensional inputs."""
    f = Var("f", Arrow(sigma, tau))
    x, y = Var("x", sigma), Var("y", sigma)
    return _forall([f, x, y], imps(
        Ext(f.ty, f), Ext(sigma, x), Ext(sigma, y), ExtEq(sigma, x, y),
        ExtEq(tau, App(f, x), App(f, y))))


def ext_prime_axiom(sigma: FiniteType, tau: FiniteType) -> Formula:
    """EXT' for functionals ``(sigma -> N) -> (tau -> N)``; only primitive equality at N."""
    s0, t0 = Arrow(sigma, NAT), Arrow(tau, NAT)
    f = Var("f", Arrow(s0, t0))
    x, y = Var("x", s0), Var("y", s0)
    u, v = Var("u", sigma), Var("v", tau)
    return _forall([f, x, y], imps(
        Ext(f.ty, f), Ext(s0, x), Ext(s0, y),
        forall_ext(u, PrimEq(NAT, App(x, u), App(y, u))),
        forall_ext(v, PrimEq(NAT, App(App(f, x), v), App(App(f, y), v)))))


def cext_witness_type(sigma: FiniteType, tau: FiniteType) -> FiniteType:
    s0, t0 = Arrow(sigma, NAT), Arrow(tau, NAT)
    return arrows(Arrow(s0, t0), s0, s0, tau, sigma)


def cext_axiom(sigma: FiniteType, tau: FiniteType) -> Formula:
    """CEXT; the witness ``Z`` itself is not asked to be extensional."""
    s0, t0 = Arrow(sigma, NAT), Arrow(tau, NAT)
    z = Var("Z", cext_witness_type(sigma, tau))
    f = Var("f", Arrow(s0, t0))
    x, y = Var("x", s0), Var("y", s0)
    v = Var("v", tau)
    point = ap(z, f, x, y, v)
    body = Imp(
        neg(PrimEq(NAT, ap(f, x, v), ap(f, y, v))),
        And(Ext(sigma, point), neg(PrimEq(NAT, App(x, point), App(y, point)))))
    for w in (v, y, x, f):
        body = forall_ext(w, body)
    return Exists(z.name, z.ty, body)


# ---------------------------------------------------------------------------
# Star translation


def has_hybrid_atoms(f: Formula) -> bool:
    if isinstance(f, (Ext, ExtEq)):
        return True
    if isinstance(f, (And, Or, Imp)):
        return has_hybrid_atoms(f.left) or has_hybrid_atoms(f.right)
    if isinstance(f, (Forall, Exists)):
        return has_hybrid_atoms(f.body)
    return False


def star_translate(f: Formula) -> Formula:
    """Replace ``==`` by ``=`` and relativize every quantifier to ``ext``.

    Only defined on formulas without ``ext``/``=`` atoms; anything else
    raises ``StarError``. The free variables of the result are those of
    ``f``; see ``star_embed`` for the guarded closure.
    """
    if has_hybrid_atoms(f):
        raise StarError("star translation is only defined on formulas without ext or = atoms")
    return _star(f)


def _star(f: Formula) -> Formula:
    if isinstance(f, PrimEq):
        return ExtEq(f.ty, f.lhs, f.rhs)
    if isinstance(f, Falsum):
        return f
    if isinstance(f, (And, Or, Imp)):
        return type(f)(_star(f.left), _star(f.right))
    if isinstance(f, Forall):
        return Forall(f.var, f.ty, Imp(Ext(f.ty, Var(f.var, f.ty)), _star(f.body)))
    if isinstance(f, Exists):
        return Exists(f.var, f.ty, And(Ext(f.ty, Var(f.var, f.ty)), _star(f.body)))
    raise TypeError(f)


def star_embed(f: Formula) -> tuple[list[tuple[str, FiniteType]], Formula]:
    """The free variables of ``f`` (sorted) and ``ext(x1) -> ... -> ext(xn) -> f*``."""
    fv = sorted(free_vars(f), key=lambda v: (v[0], str(v[1])))
    body = star_translate(f)
    for name, ty in reversed(fv):
        body = Imp(Ext(ty, Var(name, ty)), body)
    return fv, body


def quantifiers_guarded(f: Formula) -> bool:
    """Every quantifier's body starts with an ``ext`` guard on its own variable."""
    if isinstance(f, (And, Or, Imp)):
        return quantifiers_guarded(f.left) and quantifiers_guarded(f.right)
    if isinstance(f, (Forall, Exists)):
        body = f.body
        link = Imp if isinstance(f, Forall) else And
        if not (isinstance(body, link) and body.left == Ext(f.ty, Var(f.var, f.ty))):
            return False
        return quantifiers_guarded(body.right)
    return True


# ---------------------------------------------------------------------------
# Elimination of extensionality


def ext_def_formula(sigma: FiniteType, x: Term, avoid: Optional[set] = None) -> Formula:
    """``ext_sigma(x)`` expanded into a formula with only primitive equality."""
    avoid = set(avoid or ()) | _avoid(x)
    if isinstance(sigma, Nat):
        return top()
    if isinstance(sigma, Prod):
        return And(ext_def_formula(sigma.left, fst(x), avoid),
                   ext_def_formula(sigma.right, snd(x), avoid))
    dom, cod = sigma.dom, sigma.cod
    # the two conjuncts are separate scopes and may reuse names
    inner = set(avoid)
    u = _var("x", dom, inner)
    preserves_ext = Forall(u.name, dom, Imp(
        ext_def_formula(dom, u, inner), ext_def_formula(cod, App(x, u), inner)))
    inner = set(avoid)
    u2, v2 = _var("x", dom, inner), _var("y", dom, inner)
    preserves_eq = _forall([u2, v2], imps(
        exteq_def_formula(dom, u2, v2, inner),
        ext_def_formula(dom, u2, inner),
        ext_def_formula(dom, v2, inner),
        exteq_def_formula(cod, App(x, u2), App(x, v2), inner)))
    return And(preserves_ext, preserves_eq)


def exteq_def_formula(sigma: FiniteType, x: Term, y: Term,
                      avoid: Optional[set] = None) -> Formula:
    """``x =_sigma y`` expanded with the same definitions as ``ext_def_formula``."""
    avoid = set(avoid or ()) | _avoid(x, y)
    if isinstance(sigma, Nat):
        return PrimEq(NAT, x, y)
    if isinstance(sigma, Prod):
        return And(exteq_def_formula(sigma.left, fst(x), fst(y), avoid),
                   exteq_def_formula(sigma.right, snd(x), snd(y), avoid))
    u = _var("x", sigma.dom, avoid)
    return Forall(u.name, u.ty, Imp(
        ext_def_formula(sigma.dom, u, avoid),
        exteq_def_formula(sigma.cod, App(x, u), App(y, u), avoid)))


def _bound_names(f: Formula) -> set:
    return formula_names(f)


def ee_translate(f: Formula) -> Formula:
    """Replace every ``ext`` and ``=`` atom by its definitional expansion."""
    avoid = _bound_names(f)

    def go(g: Formula) -> Formula:
        if isinstance(g, Ext):
            return ext_def_formula(g.ty, g.term, avoid)
        if isinstance(g, ExtEq):
            return exteq_def_formula(g.ty, g.lhs, g.rhs, avoid)
        if isinstance(g, (PrimEq, Falsum)):
            return g
        if isinstance(g, (And, Or, Imp)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, (Forall, Exists)):
            return type(g)(g.var, g.ty, go(g.body))
        raise TypeError(g)

    return go(f)


def exteq_unfold(sigma: FiniteType, x: Term, y: Term,
                 avoid: Optional[set] = None) -> Formula:
    """``x =_sigma y`` rewritten through the defining equivalences until no ``=`` is left.

    Arrow types give ``forallE u. x u = y u``; ``ext`` atoms are kept.
    """
    avoid = set(avoid or ()) | _avoid(x, y)
    if isinstance(sigma, Nat):
        return PrimEq(NAT, x, y)
    if isinstance(sigma, Prod):
        return And(exteq_unfold(sigma.left, fst(x), fst(y), avoid),
                   exteq_unfold(sigma.right, snd(x), snd(y), avoid))
    u = _var("u", sigma.dom, avoid)
    return forall_ext(u, exteq_unfold(sigma.cod, App(x, u), App(y, u), avoid))


def unfold_eq(f: Formula) -> Formula:
    """Apply ``exteq_unfold`` to every ``=`` atom of ``f``."""
    avoid = _bound_names(f)

    def go(g: Formula) -> Formula:
        if isinstance(g, ExtEq):
            return exteq_unfold(g.ty, g.lhs, g.rhs, avoid)
        if isinstance(g, (And, Or, Imp)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, (Forall, Exists)):
            return type(g)(g.var, g.ty, go(g.body))
        return g

    return go(f)


# ---------------------------------------------------------------------------
# Modified realizability


def _rtype(f: Formula) -> Optional[FiniteType]:
    # None: the formula has no computational content
    if isinstance(f, (PrimEq, ExtEq, Ext, Falsum)):
        return None
    if isinstance(f, And):
        a, b = _rtype(f.left), _rtype(f.right)
        if a is None or b is None:
            return a or b
        return Prod(a, b)
    if isinstance(f, Or):
        return Prod(NAT, Prod(_rtype(f.left) or NAT, _rtype(f.right) or NAT))
    if isinstance(f, Imp):
        a, b = _rtype(f.left), _rtype(f.right)
        if b is None:
            return None
        return b if a is None else Arrow(a, b)
    if isinstance(f, Forall):
        a = _rtype(f.body)
        return None if a is None else Arrow(f.ty, a)
    if isinstance(f, Exists):
        a = _rtype(f.body)
        return f.ty if a is None else Prod(f.ty, a)
    raise TypeError(f)


def _mr(r: Optional[Term], f: Formula, avoid: set) -> Formula:
    # r is None exactly when f has no computational content
    if isinstance(f, (PrimEq, ExtEq, Ext, Falsum)):
        return f
    if isinstance(f, And):
        a, b = _rtype(f.left), _rtype(f.right)
        ra = None if a is None else (fst(r) if b is not None else r)
        rb = None if b is None else (snd(r) if a is not None else r)
        return And(_mr(ra, f.left, avoid), _mr(rb, f.right, avoid))
    if isinstance(f, Or):
        tag = PrimEq(NAT, fst(r), Const(Kind.ZERO))
        left = _mr(fst(snd(r)) if _rtype(f.left) else None, f.left, avoid)
        right = _mr(snd(snd(r)) if _rtype(f.right) else None, f.right, avoid)
        return And(Imp(tag, left), Imp(neg(tag), right))
    if isinstance(f, Imp):
        a, b = _rtype(f.left), _rtype(f.right)
        if a is None:
            return Imp(_mr(None, f.left, avoid), _mr(r, f.right, avoid))
        y = _var("y", a, avoid)
        rb = None if b is None else App(r, y)
        return Forall(y.name, a, Imp(_mr(y, f.left, avoid), _mr(rb, f.right, avoid)))
    if isinstance(f, Forall):
        z = Var(f.var, f.ty)
        rb = None if _rtype(f.body) is None else App(r, z)
        return Forall(f.var, f.ty, _mr(rb, f.body, avoid))
    if isinstance(f, Exists):
        if _rtype(f.body) is None:
            return substitute_formula(_mr(None, f.body, avoid), f.var, r)
        inner = _mr(snd(r), f.body, avoid)
        return substitute_formula(inner, f.var, fst(r))
    raise TypeError(f)


def mr_translate(x: str, f: Formula) -> tuple[FiniteType, Formula]:
    """``x mr f``: the realizer type and the realizability formula.

    ``ext`` and ``=`` atoms (like all atoms) are realized by anything; when
    the whole formula has no content the realizer type is ``N`` and ``x``
    does not occur in the result.
    """
    avoid = formula_names(f)
    if x in avoid:
        raise ValueError(f"realizer variable {x} already occurs in the formula")
    avoid.add(x)
    ty = _rtype(f)
    if ty is None:
        return NAT, _mr(None, f, avoid)
    return ty, _mr(Var(x, ty), f, avoid)
