"""Bounded evaluation of closed formulas in the standard model.

Quantifiers range over finite lists of closed terms produced by
``enumerate_domain``: numerals up to a bound at ``N``, pairs at products,
and at arrow types a deduplicated family of small definable functions.
A ``Holds`` verdict therefore only means that no counterexample was found
among those elements.

Terms are evaluated denotationally: combinators become Python closures and
the recursor a loop. ``DomainSpec(engine="rewrite")`` evaluates closed
numeric terms with the rewrite engine instead, for cross-checking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Any, Callable, Optional

from .build import ap, cond, const_fn, fst, lam, num, pair, snd, suc
from .rewrite import FuelExhausted, Status, eval_nat, lib, normalize
from .syntax import (
    And, App, Const, Exists, Ext, ExtEq, Falsum, FiniteType, Forall,
    Formula, Imp, Kind, Nat, Or, PrimEq, Prod, Term, Var, free_vars, pretty,
)
from .typecheck import check_formula, substitute_formula, substitute_term, type_of

__all__ = [
    "DomainSpec", "Outcome", "Verdict", "ModelError", "enumerate_domain",
    "evaluate", "eval_formula", "recheck_counterexample", "has_arrow",
]


class ModelError(ValueError):
    """Raised for formulas the bounded model cannot evaluate."""


@dataclass(frozen=True)
class DomainSpec:
    """Bounds for the finite domains.

    ``nat_bound``: type ``N`` ranges over ``0..nat_bound``.
    ``term_budget``: largest size of the arithmetic bodies used to build
    functions at arrow types.
    ``max_terms``: at most this many elements at any type other than ``N``.
    ``fuel``: evaluation budget per closed term.
    """

    nat_bound: int = 8
    term_budget: int = 7
    fuel: int = 100_000
    max_terms: int = 24
    engine: str = "denote"

    def __post_init__(self):
        for name in ("nat_bound", "term_budget", "fuel", "max_terms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.engine not in ("denote", "rewrite"):
            raise ValueError(f"unknown engine {self.engine!r}")


class Outcome(Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    """Result of a bounded evaluation.

    On failure ``counterexample`` assigns closed terms to the leading
    universal variables; it is empty when the formula is false without
    such a prefix (for instance an existential with no witness).
    """

    outcome: Outcome
    counterexample: tuple = ()
    witness: tuple = field(default=(), compare=False)

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome is Outcome.FAILS

    def __str__(self) -> str:
        if self.fails and self.counterexample:
            pairs = ", ".join(f"{n} := {pretty(t)}" for n, t in self.counterexample)
            return f"Fails ({pairs})"
        return self.outcome.value


def has_arrow(ty: FiniteType) -> bool:
    if isinstance(ty, Nat):
        return False
    if isinstance(ty, Prod):
        return has_arrow(ty.left) or has_arrow(ty.right)
    return True


# ---------------------------------------------------------------------------
# Denotational evaluation


class _Fuel:
    __slots__ = ("left",)

    def __init__(self, amount: int):
        self.left = amount

    def spend(self, n: int = 1):
        self.left -= n
        if self.left < 0:
            raise FuelExhausted("evaluation budget exhausted")


def _combinator(kind: Kind, fuel: _Fuel) -> Any:
    if kind is Kind.K:
        return lambda x: lambda y: x
    if kind is Kind.S:
        def s3(x, y, z):
            fuel.spend()
            return x(z)(y(z))
        return lambda x: lambda y: lambda z: s3(x, y, z)
    if kind is Kind.PAIR:
        return lambda a: lambda b: (a, b)
    if kind is Kind.FST:
        return lambda p: p[0]
    if kind is Kind.SND:
        return lambda p: p[1]
    if kind is Kind.ZERO:
        return 0
    if kind is Kind.SUCC:
        return lambda n: n + 1

    def rec(x):
        def with_step(f):
            def run(n):
                fuel.spend(n + 1)
                acc = x
                for m in range(n):
                    acc = f(m)(acc)
                return acc
            return run
        return with_step
    return rec


class _Evaluator:
    """Compiles terms to functions of an environment, with memoization."""

    def __init__(self, fuel: int):
        self.fuel = _Fuel(fuel)
        self.compiled: dict[Term, Callable] = {}
        self.closed_values: dict[Term, Any] = {}

    def refuel(self, amount: int):
        self.fuel.left = amount

    def compile(self, t: Term) -> Callable[[dict], Any]:
        done = self.compiled.get(t)
        if done is not None:
            return done
        if not free_vars(t):
            value = self.value(t)
            fn = lambda env, v=value: v
        elif isinstance(t, Var):
            name = t.name
            fn = lambda env: env[name]
        else:
            f, a = self.compile(t.fun), self.compile(t.arg)
            fn = lambda env: f(env)(a(env))
        self.compiled[t] = fn
        return fn

    def value(self, t: Term) -> Any:
        """Value of a closed term."""
        done = self.closed_values.get(t)
        if done is not None:
            return done
        # iterative over the left spine, recursive over arguments
        head, args = t, []
        while isinstance(head, App):
            args.append(head.arg)
            head = head.fun
        if isinstance(head, Var):
            raise ModelError(f"free variable {head.name} in a closed evaluation")
        v = _combinator(head.kind, self.fuel)
        for a in reversed(args):
            v = v(self.value(a))
        self.closed_values[t] = v
        return v


@lru_cache(maxsize=None)
def _evaluator_for(spec: DomainSpec) -> _Evaluator:
    """One evaluator per spec: domain values are closures over its fuel, so
    refueling it before each evaluation also renews their budget."""
    return _Evaluator(spec.fuel)


def evaluate(t: Term, spec: Optional[DomainSpec] = None) -> Any:
    """Python value of a closed term: ints, tuples and functions."""
    spec = spec or DomainSpec()
    if free_vars(t):
        raise ModelError("evaluate needs a closed term")
    return _Evaluator(spec.fuel).value(t)


# ---------------------------------------------------------------------------
# Domains


def _fingerprint(value: Any, ty: FiniteType, spec: DomainSpec) -> Any:
    if isinstance(ty, Nat):
        return value
    if isinstance(ty, Prod):
        return (_fingerprint(value[0], ty.left, spec), _fingerprint(value[1], ty.right, spec))
    return tuple(_fingerprint(value(v), ty.cod, spec) for v in _sample_values(ty.dom, spec))


def _sample_values(ty: FiniteType, spec: DomainSpec) -> list:
    return [v for _, v in _domain(ty, spec)]


def _observations(x: Term, ty: FiniteType, spec: DomainSpec) -> list[Term]:
    """Numeric terms that inspect ``x``: itself, its projections, its values at small arguments."""
    if isinstance(ty, Nat):
        return [x]
    if isinstance(ty, Prod):
        return _observations(fst(x), ty.left, spec) + _observations(snd(x), ty.right, spec)
    points = [t for t, _ in _domain(ty.dom, spec)[:3]]
    return [o for p in points for o in _observations(App(x, p), ty.cod, spec)]


def _numeric_bodies(atoms: list[Term], budget: int):
    """Numeric expressions over ``atoms`` by increasing size, built from SUC, pred, add and cond."""
    by_size: dict[int, list[Term]] = {1: list(atoms) + [num(0), num(1)]}
    yield from by_size[1]
    for size in range(2, budget + 1):
        level = []
        for e in by_size[size - 1]:
            level.append(suc(e))
            level.append(ap(lib("pred"), e))
        for i in range(1, size - 1):
            j = size - 1 - i
            for a in by_size.get(i, []):
                for b in by_size.get(j, []):
                    level.append(ap(lib("add"), a, b))
        for i in range(1, size - 2):
            for j in range(1, size - 1 - i):
                k = size - 1 - i - j
                for a in by_size.get(i, []):
                    if isinstance(a, Const):
                        continue
                    for b in by_size.get(j, []):
                        for c in by_size.get(k, []):
                            level.append(cond(a, b, c))
        by_size[size] = level
        yield from level


def _functions(dom: FiniteType, cod: FiniteType, spec: DomainSpec) -> list[Term]:
    """Closed terms of type ``dom -> cod``, distinct on the sample inputs."""
    ev = _evaluator_for(spec)
    samples = _sample_values(dom, spec)
    seen: set = set()
    out: list[Term] = []

    def offer(t: Term) -> bool:
        try:
            ev.refuel(spec.fuel)
            v = ev.value(t)
            key = tuple(_fingerprint(v(s), cod, spec) for s in samples)
        except FuelExhausted:
            return False
        if key in seen:
            return False
        seen.add(key)
        out.append(t)
        return len(out) >= spec.max_terms

    # constants take at most a third of the room
    for c, _ in _domain(cod, spec)[:max(1, spec.max_terms // 3)]:
        if offer(const_fn(dom, c)):
            return out
    if isinstance(cod, Nat):
        x = Var("%x", dom)
        atoms = _observations(x, dom, spec)
        # body size counts one per atom or operation
        for body in _numeric_bodies(atoms, spec.term_budget):
            if offer(lam(dom, lambda v: substitute_term(body, "%x", v))):
                return out
    elif isinstance(cod, Prod):
        lefts = _functions(dom, cod.left, spec)
        rights = _functions(dom, cod.right, spec)
        for f, g in _diagonal(lefts, rights):
            if offer(lam(dom, lambda v: pair(ap(f, v), ap(g, v)))):
                return out
    else:
        for g in _functions(Prod(dom, cod.dom), cod.cod, spec):
            if offer(lam((dom, cod.dom), lambda v, w: ap(g, pair(v, w)))):
                return out
    return out


def _diagonal(xs: list, ys: list):
    """All pairs ordered by the sum of their indices."""
    for total in range(len(xs) + len(ys) - 1):
        for i in range(max(0, total - len(ys) + 1), min(total, len(xs) - 1) + 1):
            yield xs[i], ys[total - i]


@lru_cache(maxsize=None)
def _domain(ty: FiniteType, spec: DomainSpec) -> list[tuple[Term, Any]]:
    ev = _evaluator_for(spec)
    if isinstance(ty, Nat):
        terms = [num(n) for n in range(spec.nat_bound + 1)]
    elif isinstance(ty, Prod):
        left = [t for t, _ in _domain(ty.left, spec)]
        right = [t for t, _ in _domain(ty.right, spec)]
        terms = [pair(a, b) for a, b in itertools.islice(_diagonal(left, right), spec.max_terms)]
    else:
        terms = _functions(ty.dom, ty.cod, spec)
    out = []
    for t in terms:
        ev.refuel(spec.fuel)
        out.append((t, ev.value(t)))
    return out


def enumerate_domain(ty: FiniteType, spec: Optional[DomainSpec] = None) -> list[Term]:
    """The closed terms a quantifier over ``ty`` ranges over."""
    return [t for t, _ in _domain(ty, spec or DomainSpec())]


# ---------------------------------------------------------------------------
# Formulas

# Kleene truth values: True, False, None


def _not(a):
    return None if a is None else not a


def _and(a, b):
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def _or(a, b):
    if a is True or b is True:
        return True
    if a is None or b is None:
        return None
    return False


class _FormulaEvaluator:
    def __init__(self, spec: DomainSpec):
        self.spec = spec
        self.ev = _evaluator_for(spec)

    def term_value(self, t: Term, env: dict) -> Any:
        self.ev.refuel(self.spec.fuel)
        if self.spec.engine == "rewrite" and isinstance(type_of(t), Nat):
            closed = t
            for name, (term, _) in env.items():
                closed = _subst_if_present(closed, name, term)
            return eval_nat(closed, self.spec.fuel)
        values = {name: value for name, (_, value) in env.items()}
        return self.ev.compile(t)(values)

    def differs(self, a: Any, b: Any, ty: FiniteType) -> bool:
        if isinstance(ty, Nat):
            return a != b
        if isinstance(ty, Prod):
            return self.differs(a[0], b[0], ty.left) or self.differs(a[1], b[1], ty.right)
        return any(self.differs(a(v), b(v), ty.cod) for v in _sample_values(ty.dom, self.spec))

    def prim_eq(self, f: PrimEq, env: dict):
        try:
            a, b = self.term_value(f.lhs, env), self.term_value(f.rhs, env)
            if not has_arrow(f.ty):
                return a == b
            self.ev.refuel(self.spec.fuel)
            if self.differs(a, b, f.ty):
                return False
        except FuelExhausted:
            return None
        # identical normal forms are intensionally equal; otherwise undecided
        lhs, rhs = f.lhs, f.rhs
        for name, (term, _) in env.items():
            lhs, rhs = _subst_if_present(lhs, name, term), _subst_if_present(rhs, name, term)
        nl, nr = normalize(lhs, self.spec.fuel), normalize(rhs, self.spec.fuel)
        if nl.status is Status.NORMAL_FORM and nr.status is Status.NORMAL_FORM \
                and nl.result == nr.result:
            return True
        return None

    def run(self, f: Formula, env: dict):
        if isinstance(f, PrimEq):
            return self.prim_eq(f, env)
        if isinstance(f, Falsum):
            return False
        if isinstance(f, And):
            a = self.run(f.left, env)
            return False if a is False else _and(a, self.run(f.right, env))
        if isinstance(f, Or):
            a = self.run(f.left, env)
            return True if a is True else _or(a, self.run(f.right, env))
        if isinstance(f, Imp):
            a = self.run(f.left, env)
            if a is False:
                return True
            return _or(_not(a), self.run(f.right, env))
        if isinstance(f, (Forall, Exists)):
            want = isinstance(f, Exists)
            result = not want
            for term, value in _domain(f.ty, self.spec):
                inner = dict(env)
                inner[f.var] = (term, value)
                r = self.run(f.body, inner)
                if r is want:
                    return want
                if r is None:
                    result = None
            return result
        raise ModelError(f"cannot evaluate {type(f).__name__} atoms; expand them first")


def _subst_if_present(t: Term, name: str, s: Term) -> Term:
    if any(n == name for n, _ in free_vars(t)):
        return substitute_term(t, name, s)
    return t


def _check_evaluable(f: Formula) -> None:
    if isinstance(f, (Ext, ExtEq)):
        raise ModelError("ext and = atoms must be expanded before bounded evaluation")
    if isinstance(f, (And, Or, Imp)):
        _check_evaluable(f.left)
        _check_evaluable(f.right)
    elif isinstance(f, (Forall, Exists)):
        _check_evaluable(f.body)


def eval_formula(f: Formula, spec: Optional[DomainSpec] = None) -> Verdict:
    """Evaluate a closed formula without ``ext`` or ``=`` atoms."""
    spec = spec or DomainSpec()
    _check_evaluable(f)
    if free_vars(f):
        names = ", ".join(sorted(n for n, _ in free_vars(f)))
        raise ModelError(f"open formula (free: {names})")
    check_formula(f, closed=True)
    fe = _FormulaEvaluator(spec)
    prefix, body = [], f
    while isinstance(body, Forall):
        prefix.append((body.var, body.ty))
        body = body.body
    saw_unknown = False
    domains = [_domain(ty, spec) for _, ty in prefix]
    for combo in itertools.product(*domains):
        env = {}
        for (name, _), elem in zip(prefix, combo):
            env[name] = elem
        r = fe.run(body, env)
        if r is False:
            cex = tuple((name, term) for (name, _), (term, _) in zip(prefix, combo))
            return Verdict(Outcome.FAILS, cex)
        if r is None:
            saw_unknown = True
    return Verdict(Outcome.UNKNOWN if saw_unknown else Outcome.HOLDS)


def recheck_counterexample(f: Formula, verdict: Verdict,
                           spec: Optional[DomainSpec] = None) -> bool:
    """True when plugging the counterexample into the body of ``f`` evaluates to false."""
    body = f
    for name, term in verdict.counterexample:
        assert isinstance(body, Forall) and body.var == name
        body = substitute_formula(body.body, name, term)
    return _FormulaEvaluator(spec or DomainSpec()).run(body, {}) is False
