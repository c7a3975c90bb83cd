"""The apartness translation.

Each type ``s`` gets a type ``s+`` of objects paired with a potential
extensionality realizer and a type ``s-`` of potential apartness
witnesses. ``dom`` and ``app`` say when those potential realizers are
actual ones. Terms are translated by replacing every combinator with its
image and application with ``star_app``; formulas follow the clauses in
``alpha_formula``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Optional, Sequence

from .build import ap, cond, fst, lam, num, pair, rec, snd
from .hybrid import neg, top
from .rewrite import lib
from .syntax import (
    NAT, And, App, Arrow, Const, Exists, Ext, ExtEq, Falsum, FiniteType, Forall,
    Formula, Imp, Kind, Nat, Or, PrimEq, Prod, Term, Var, arrows, free_vars,
)
from .typecheck import (
    TypeCheckError, combinator_type, fresh_name, formula_names, lambda_abstract,
    type_of, zero_term,
)

__all__ = [
    "type_plus", "type_minus", "dom_formula", "app_formula", "star_app",
    "apartness_sym_term", "apartness_split_term", "split_application",
    "alpha_combinator", "AlphaVarMap", "alpha_term", "alpha_formula", "cext_witness",
]


@lru_cache(maxsize=None)
def type_plus(ty: FiniteType) -> FiniteType:
    if isinstance(ty, Nat):
        return NAT
    if isinstance(ty, Prod):
        return Prod(type_plus(ty.left), type_plus(ty.right))
    dp, cp = type_plus(ty.dom), type_plus(ty.cod)
    return Prod(Arrow(dp, cp), arrows(dp, dp, type_minus(ty.cod), type_minus(ty.dom)))


@lru_cache(maxsize=None)
def type_minus(ty: FiniteType) -> FiniteType:
    if isinstance(ty, Nat):
        return NAT
    if isinstance(ty, Prod):
        return Prod(Prod(type_minus(ty.left), type_minus(ty.right)), NAT)
    return Prod(type_plus(ty.dom), type_minus(ty.cod))


def star_app(s: Term, t: Term) -> Term:
    """``s * t``, the first component of ``s`` applied to ``t``."""
    sty, tty = type_of(s), type_of(t)
    if not (isinstance(sty, Prod) and isinstance(sty.left, Arrow)):
        raise TypeCheckError(f"star application needs a translated function, got type {sty}")
    if sty.left.dom != tty:
        raise TypeCheckError(
            f"star application of a function on {sty.left.dom} to an argument of type {tty}")
    return App(App(Const(Kind.FST, (sty.left, sty.right)), s), t)


def _star(f: Term, *args: Term) -> Term:
    for a in args:
        f = star_app(f, a)
    return f


# ---------------------------------------------------------------------------
# dom and app


def _fresh(base: str, ty: FiniteType, avoid: set) -> Var:
    name = fresh_name(base, avoid)
    avoid.add(name)
    return Var(name, ty)


def _names_in(*terms: Term) -> set:
    return {n for t in terms for n, _ in free_vars(t)}


def dom_formula(ty: FiniteType, x: Term, avoid: Optional[set] = None) -> Formula:
    """``dom`` at ``ty`` for ``x : ty+``; bound names avoid ``avoid`` and the names in ``x``."""
    avoid = set(avoid or ()) | _names_in(x)
    if isinstance(ty, Nat):
        return top()
    if isinstance(ty, Prod):
        return And(dom_formula(ty.left, fst(x), avoid), dom_formula(ty.right, snd(x), avoid))
    sp = type_plus(ty.dom)
    inner = set(avoid)
    u = _fresh("u", sp, inner)
    total = Forall(u.name, sp, Imp(dom_formula(ty.dom, u, inner),
                                   dom_formula(ty.cod, star_app(x, u), inner)))
    inner = set(avoid)
    u, v = _fresh("u", sp, inner), _fresh("v", sp, inner)
    w = _fresh("w", type_minus(ty.cod), inner)
    reflect = Imp(dom_formula(ty.dom, u, inner), Imp(
        dom_formula(ty.dom, v, inner), Imp(
            app_formula(ty.cod, star_app(x, u), star_app(x, v), w, inner),
            app_formula(ty.dom, u, v, ap(snd(x), u, v, w), inner))))
    for var in (w, v, u):
        reflect = Forall(var.name, var.ty, reflect)
    return And(total, reflect)


def app_formula(ty: FiniteType, x: Term, y: Term, z: Term,
                avoid: Optional[set] = None) -> Formula:
    """``app`` at ``ty``: ``z : ty-`` witnesses that ``x, y : ty+`` are apart."""
    avoid = set(avoid or ()) | _names_in(x, y, z)
    if isinstance(ty, Nat):
        return neg(PrimEq(NAT, x, y))
    if isinstance(ty, Prod):
        tag = PrimEq(NAT, snd(z), Const(Kind.ZERO))
        return And(
            Imp(tag, app_formula(ty.left, fst(x), fst(y), fst(fst(z)), avoid)),
            Imp(neg(tag), app_formula(ty.right, snd(x), snd(y), snd(fst(z)), avoid)))
    point = fst(z)
    return And(dom_formula(ty.dom, point, avoid),
               app_formula(ty.cod, star_app(x, point), star_app(y, point), snd(z), avoid))


# ---------------------------------------------------------------------------
# Apartness functionals


@lru_cache(maxsize=None)
def apartness_sym_term(ty: FiniteType) -> Term:
    """``ty+ -> ty+ -> ty- -> ty-`` turning a witness of ``x # y`` into one of ``y # x``."""
    p, m = type_plus(ty), type_minus(ty)
    if isinstance(ty, Nat):
        return lam((p, p, m), lambda x, y, z: z)
    if isinstance(ty, Prod):
        sl, sr = apartness_sym_term(ty.left), apartness_sym_term(ty.right)
        return lam((p, p, m), lambda x, y, z: pair(
            pair(ap(sl, fst(x), fst(y), fst(fst(z))), ap(sr, snd(x), snd(y), snd(fst(z)))),
            snd(z)))
    sc = apartness_sym_term(ty.cod)
    return lam((p, p, m), lambda x, y, z: pair(
        fst(z), ap(sc, star_app(x, fst(z)), star_app(y, fst(z)), snd(z))))


@lru_cache(maxsize=None)
def apartness_split_term(ty: FiniteType) -> Term:
    """``ty+ -> ty+ -> ty+ -> ty- -> ty- * N``.

    From a witness of ``x # y`` and a third point ``z``: tag 0 with a
    witness of ``x # z``, or a nonzero tag with a witness of ``y # z``.
    """
    p, m = type_plus(ty), type_minus(ty)
    if isinstance(ty, Nat):
        return lam((p, p, p, m), lambda x, y, z, u: pair(
            num(0), cond(ap(lib("eq_nat"), x, z), num(1), num(0))))
    if isinstance(ty, Prod):
        tl, tr = apartness_split_term(ty.left), apartness_split_term(ty.right)
        zl, zr = zero_term(type_minus(ty.left)), zero_term(type_minus(ty.right))

        def body(x, y, z, u):
            rl = ap(tl, fst(x), fst(y), fst(z), fst(fst(u)))
            rr = ap(tr, snd(x), snd(y), snd(z), snd(fst(u)))
            left = pair(pair(pair(fst(rl), zr), num(0)), snd(rl))
            right = pair(pair(pair(zl, fst(rr)), num(1)), snd(rr))
            return cond(snd(u), left, right)

        return lam((p, p, p, m), body)
    tc = apartness_split_term(ty.cod)

    def body(x, y, z, u):
        a = fst(u)
        r = ap(tc, star_app(x, a), star_app(y, a), star_app(z, a), snd(u))
        return pair(pair(a, fst(r)), snd(r))

    return lam((p, p, p, m), body)


def split_application(dom: FiniteType, cod: FiniteType, f: Term, f2: Term,
                      u: Term, u2: Term, e: Term) -> Term:
    """Locate the source of an apartness ``f * u # f2 * u2``.

    Returns ``pair (pair a b) tag`` where ``a : (dom -> cod)-`` separates
    ``f`` from ``f2`` when the tag is 0 and ``b : dom-`` separates ``u``
    from ``u2`` otherwise.
    """
    t = ap(apartness_split_term(cod), star_app(f, u), star_app(f2, u2), star_app(f2, u), e)
    via_f = pair(u, fst(t))
    via_u = ap(apartness_sym_term(dom), u2, u,
               ap(snd(f2), u2, u, fst(t)))
    return pair(pair(via_f, via_u), snd(t))


# ---------------------------------------------------------------------------
# Combinator images

Realizer = Callable[[list, Term, Term, Term], Term]


def _unpack(e: Term, count: int) -> tuple[list, Term]:
    """Split ``e : (A1 -> ... -> Ak -> B)-`` into the k arguments and ``e_B``."""
    args = []
    for _ in range(count):
        args.append(fst(e))
        e = snd(e)
    return args, e


def _build(arg_types: Sequence[FiniteType], result: FiniteType,
           value: Callable[..., Term], realizers: Sequence[Realizer]) -> Term:
    """Image of a function of n curried arguments returning ``result``.

    ``value(*xs)`` computes the result from translated arguments.
    ``realizers[i](xs, xi, xi2, eB)`` gets the full argument list, both versions
    of argument i and a potential witness that the two results are apart.
    It returns a potential witness that ``xi`` and ``xi2`` are apart.
    """
    n = len(arg_types)
    plus = [type_plus(t) for t in arg_types]

    def level(i: int, prefix: list) -> Term:
        if i == n:
            return value(*prefix)
        rest = n - i - 1
        rest_minus = type_minus(arrows(*arg_types[i + 1:], result))
        first = lam(plus[i], lambda xi: level(i + 1, prefix + [xi]))

        def second(xi, xi2, e):
            later, e_b = _unpack(e, rest)
            return realizers[i](prefix + [xi] + later, xi, xi2, e_b)

        return pair(first, lam((plus[i], plus[i], rest_minus), second))

    return level(0, [])


@lru_cache(maxsize=None)
def alpha_combinator(kind: Kind, params: tuple = ()) -> Term:
    """The closed image of a combinator, of type ``(combinator_type(kind, params))+``."""
    params = tuple(params)
    combinator_type(kind, params)
    if kind is Kind.ZERO:
        return Const(Kind.ZERO)
    if kind is Kind.SUCC:
        return _build([NAT], NAT, lambda n: App(Const(Kind.SUCC), n),
                      [lambda xs, a, b, e: e])
    if kind is Kind.K:
        r, s = params
        return _build([r, s], r, lambda x, y: x, [
            lambda xs, a, b, e: e,
            lambda xs, a, b, e: zero_term(type_minus(s)),
        ])
    if kind is Kind.PAIR:
        s, t = params
        return _build([s, t], Prod(s, t), lambda x, y: pair(x, y), [
            lambda xs, a, b, e: fst(fst(e)),
            lambda xs, a, b, e: snd(fst(e)),
        ])
    if kind is Kind.FST:
        s, t = params
        return _build([Prod(s, t)], s, fst, [
            lambda xs, a, b, e: pair(pair(e, zero_term(type_minus(t))), num(0)),
        ])
    if kind is Kind.SND:
        s, t = params
        return _build([Prod(s, t)], t, snd, [
            lambda xs, a, b, e: pair(pair(zero_term(type_minus(s)), e), num(1)),
        ])
    if kind is Kind.S:
        return _s_alpha(*params)
    return _rec_alpha(*params)


def _s_alpha(r: FiniteType, s: FiniteType, t: FiniteType) -> Term:
    def value(x, y, z):
        return _star(x, z, star_app(y, z))

    def for_x(xs, x, x2, e):
        _, y, z = xs
        return pair(z, pair(star_app(y, z), e))

    def for_y(xs, y, y2, e):
        x, _, z = xs
        return pair(z, ap(snd(star_app(x, z)), star_app(y, z), star_app(y2, z), e))

    def for_z(xs, z, z2, e):
        x, y, _ = xs
        found = split_application(s, t, star_app(x, z), star_app(x, z2),
                                  star_app(y, z), star_app(y, z2), e)
        return cond(snd(found),
                    ap(snd(x), z, z2, fst(fst(found))),
                    ap(snd(y), z, z2, snd(fst(found))))

    return _build([arrows(r, s, t), Arrow(r, s), r], t, value, [for_x, for_y, for_z])


def _rec_alpha(s: FiniteType) -> Term:
    sp, sm = type_plus(s), type_minus(s)
    step_ty = arrows(NAT, s, s)

    def f(x: Term, y: Term, n: Term) -> Term:
        return rec(x, lam((NAT, sp), lambda m, z: _star(y, m, z)), n)

    def for_x(xs, x, x2, e):
        _, y, n = xs
        back = rec(
            lam(sm, lambda d: d),
            lam((NAT, Arrow(sm, sm)), lambda m, g: lam(sm, lambda d: App(
                g, ap(snd(star_app(y, m)), f(x, y, m), f(x2, y, m), d)))),
            n)
        return App(back, e)

    def for_y(xs, y, y2, e):
        x, _, n = xs
        out = type_minus(step_ty)

        def step(m, h):
            def body(d):
                found = split_application(s, s, star_app(y, m), star_app(y2, m),
                                          f(x, y, m), f(x, y2, m), d)
                return cond(snd(found), pair(m, fst(fst(found))), App(h, snd(fst(found))))
            return lam(sm, body)

        search = rec(lam(sm, lambda d: zero_term(out)),
                     lam((NAT, Arrow(sm, out)), step), n)
        return App(search, e)

    def for_n(xs, n, n2, e):
        return num(0)

    return _build([s, step_ty, NAT], s, f, [for_x, for_y, for_n])


# ---------------------------------------------------------------------------
# Terms and formulas


class AlphaVarMap:
    """Injective assignment ``x : s`` to ``x_a : s+``.

    Names are ``<name>_a``; a counter is appended when that name is
    already taken by another source variable or by a reserved name.
    """

    def __init__(self, reserved: Sequence[str] = ()):
        self._map: dict[tuple[str, FiniteType], str] = {}
        self._taken: set[str] = set(reserved)

    def reserve(self, names) -> None:
        self._taken |= set(names)

    def __contains__(self, key) -> bool:
        return key in self._map

    def get(self, name: str, ty: FiniteType) -> Var:
        key = (name, ty)
        target = self._map.get(key)
        if target is None:
            target = fresh_name(f"{name}_a", self._taken)
            self._taken.add(target)
            self._map[key] = target
        return Var(target, type_plus(ty))

    def lookup(self, name: str, ty: FiniteType) -> Var:
        target = self._map.get((name, ty))
        if target is None:
            raise KeyError(f"no translated variable for {name}")
        return Var(target, type_plus(ty))

    def names(self) -> set[str]:
        return set(self._map.values())

    def items(self):
        return dict(self._map).items()


def alpha_term(t: Term, vmap: AlphaVarMap) -> Term:
    """Translate ``t``; every free variable must already be in ``vmap``."""
    memo: dict[int, Term] = {}

    def go(u: Term) -> Term:
        key = id(u)
        if key in memo:
            return memo[key]
        if isinstance(u, Var):
            r = vmap.lookup(u.name, u.ty)
        elif isinstance(u, Const):
            r = alpha_combinator(u.kind, u.params)
        else:
            r = star_app(go(u.fun), go(u.arg))
        memo[key] = r
        return r

    return go(t)


def alpha_formula(f: Formula, vmap: Optional[AlphaVarMap] = None) -> Formula:
    """Translate ``f``.

    Free variables are added to ``vmap`` when missing (a fresh map is
    made when none is given), so the caller can read off the assignment.
    """
    vmap = vmap if vmap is not None else AlphaVarMap()
    source_names = formula_names(f)
    vmap.reserve(source_names)
    for name, ty in sorted(free_vars(f), key=lambda v: (v[0], str(v[1]))):
        vmap.get(name, ty)
    # register bound variables first so helper binders can avoid every target name
    _register_bound(f, vmap)
    avoid = set(source_names) | vmap.names()

    def go(g: Formula) -> Formula:
        if isinstance(g, Ext):
            return dom_formula(g.ty, alpha_term(g.term, vmap), avoid)
        if isinstance(g, PrimEq):
            return PrimEq(type_plus(g.ty), alpha_term(g.lhs, vmap), alpha_term(g.rhs, vmap))
        if isinstance(g, ExtEq):
            w = _fresh("w", type_minus(g.ty), set(avoid))
            return neg(Exists(w.name, w.ty, app_formula(
                g.ty, alpha_term(g.lhs, vmap), alpha_term(g.rhs, vmap), w, avoid)))
        if isinstance(g, Falsum):
            return g
        if isinstance(g, (And, Or, Imp)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, (Forall, Exists)):
            target = vmap.get(g.var, g.ty)
            return type(g)(target.name, target.ty, go(g.body))
        raise TypeError(g)

    return go(f)


def _register_bound(f: Formula, vmap: AlphaVarMap) -> None:
    if isinstance(f, (And, Or, Imp)):
        _register_bound(f.left, vmap)
        _register_bound(f.right, vmap)
    elif isinstance(f, (Forall, Exists)):
        vmap.get(f.var, f.ty)
        _register_bound(f.body, vmap)


def cext_witness(sigma: FiniteType, tau: FiniteType) -> Term:
    """The closed witness ``Z`` for converse extensionality at ``sigma, tau``.

    ``Z * f * x * y * v`` reduces to ``fst (snd f x y (pair v 0))``. The
    binders are compiled with the plain (unoptimized) abstraction.
    """
    s0, t0 = Arrow(sigma, NAT), Arrow(tau, NAT)
    tys = [Arrow(s0, t0), s0, s0, tau]
    names = ["f", "x", "y", "v"]
    vs = [Var(n, type_plus(ty)) for n, ty in zip(names, tys)]
    f, x, y, v = vs
    body = fst(ap(snd(f), x, y, pair(v, Const(Kind.ZERO))))
    result = sigma
    for ty, var in zip(reversed(tys), reversed(vs)):
        whole = Arrow(ty, result)
        dummy = zero_term(type_plus(whole).right)
        body = pair(lambda_abstract(var.name, var.ty, body), dummy)
        result = whole
    return body
