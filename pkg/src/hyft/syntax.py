"""Finite types, combinator terms and hybrid formulas.

Abstract syntax, a recursive-descent parser with local type-parameter
inference, a pretty-printer that round-trips through the parser, and a
JSON dump of every AST.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Union

__all__ = [
    "FiniteType", "Nat", "Prod", "Arrow", "NAT",
    "Kind", "Term", "Var", "Const", "App",
    "Formula", "PrimEq", "ExtEq", "Ext", "Falsum", "FALSUM", "And", "Or", "Imp",
    "Forall", "Exists",
    "ParseError", "parse_type", "parse_term", "parse_formula", "pretty",
    "free_vars", "numeral", "numeral_value", "spine", "mk_app", "arrows",
    "to_json", "from_json", "subterms",
]


# ---------------------------------------------------------------------------
# Types


class FiniteType:
    """Base of the type grammar.

    Types are hash-consed: building a type that already exists returns the
    existing object. The translated types grow quickly with nesting, and
    interning keeps comparisons of large types to an identity check.
    """

    __slots__ = ()

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __delattr__(self, name):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __str__(self) -> str:
        return pretty(self)


class Nat(FiniteType):
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (Nat, ())

    def __repr__(self) -> str:
        return "Nat"


_INTERNED: dict[tuple, FiniteType] = {}


def _intern(cls, a: FiniteType, b: FiniteType, names: tuple[str, str]) -> FiniteType:
    # children are interned already, so their identities are a sound key
    key = (cls, id(a), id(b))
    obj = _INTERNED.get(key)
    if obj is None:
        if not (isinstance(a, FiniteType) and isinstance(b, FiniteType)):
            raise TypeError(f"{cls.__name__} needs two types, got {a!r} and {b!r}")
        obj = object.__new__(cls)
        object.__setattr__(obj, names[0], a)
        object.__setattr__(obj, names[1], b)
        object.__setattr__(obj, "_h", hash((cls.__name__, a, b)))
        # types with parser placeholders live only during one parse
        if not (_is_open(a) or _is_open(b)):
            _INTERNED[key] = obj
    return obj


def _is_open(ty: FiniteType) -> bool:
    return isinstance(ty, _Meta) or (
        isinstance(ty, (Prod, Arrow)) and _INTERNED.get(
            (type(ty), id(getattr(ty, ty.__slots__[0])), id(getattr(ty, ty.__slots__[1])))
        ) is not ty)


class Prod(FiniteType):
    __slots__ = ("left", "right", "_h")

    def __new__(cls, left: FiniteType, right: FiniteType):
        return _intern(cls, left, right, ("left", "right"))

    def __reduce__(self):
        return (Prod, (self.left, self.right))

    def __hash__(self):
        return self._h

    def __repr__(self) -> str:
        return f"Prod(left={self.left!r}, right={self.right!r})"


class Arrow(FiniteType):
    __slots__ = ("dom", "cod", "_h")

    def __new__(cls, dom: FiniteType, cod: FiniteType):
        return _intern(cls, dom, cod, ("dom", "cod"))

    def __reduce__(self):
        return (Arrow, (self.dom, self.cod))

    def __hash__(self):
        return self._h

    def __repr__(self) -> str:
        return f"Arrow(dom={self.dom!r}, cod={self.cod!r})"


NAT = Nat()


def arrows(*tys: FiniteType) -> FiniteType:
    """``arrows(a, b, c)`` is ``a -> b -> c``."""
    result = tys[-1]
    for ty in reversed(tys[:-1]):
        result = Arrow(ty, result)
    return result


# ---------------------------------------------------------------------------
# Terms
#
# Terms can get very large (compiled lambdas, alpha images), so nodes cache
# their hash and equality is iterative.


class Kind(Enum):
    K = "K"
    S = "S"
    PAIR = "PAIR"
    FST = "FST"
    SND = "SND"
    ZERO = "0"
    SUCC = "SUC"
    REC = "REC"


ARITY = {
    Kind.K: 2, Kind.S: 3, Kind.PAIR: 2, Kind.FST: 2, Kind.SND: 2,
    Kind.ZERO: 0, Kind.SUCC: 0, Kind.REC: 1,
}


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return pretty(self)

    def __call__(self, *args: "Term") -> "Term":
        return mk_app(self, *args)


@dataclass(frozen=True, eq=False)
class Var(Term):
    name: str
    ty: FiniteType
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("var", self.name, self.ty)))

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Var) and self._h == other._h
            and self.name == other.name and self.ty == other.ty)


@dataclass(frozen=True, eq=False)
class Const(Term):
    kind: Kind
    params: tuple = ()
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        params = tuple(self.params)
        if len(params) != ARITY[self.kind]:
            raise ValueError(
                f"{self.kind.value} takes {ARITY[self.kind]} type parameters, got {len(params)}")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "_h", hash(("const", self.kind, params)))

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Const) and self._h == other._h
            and self.kind is other.kind and self.params == other.params)


@dataclass(frozen=True, eq=False)
class App(Term):
    fun: Term
    arg: Term
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("app", self.fun._h, self.arg._h)))

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, App) or self._h != other._h:
            return False
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if isinstance(a, App):
                if not isinstance(b, App) or a._h != b._h:
                    return False
                stack.append((a.arg, b.arg))
                stack.append((a.fun, b.fun))
            elif a != b:
                return False
        return True

    def __repr__(self):
        return f"App({self.fun!r}, {self.arg!r})"


ZERO = Const(Kind.ZERO)
SUCC = Const(Kind.SUCC)


def mk_app(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``h a1 ... an`` into ``(h, [a1, ..., an])``."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def numeral(n: int) -> Term:
    t: Term = ZERO
    for _ in range(n):
        t = App(SUCC, t)
    return t


def numeral_value(t: Term) -> Optional[int]:
    """The n with ``t == S^n 0``, or None."""
    n = 0
    while isinstance(t, App) and t.fun == SUCC:
        t = t.arg
        n += 1
    return n if t == ZERO else None


_NO_VARS: frozenset = frozenset()


def _term_free_vars(t: Term) -> frozenset:
    # cached per node; computed bottom-up without recursion
    done = t.__dict__.get("_fv")
    if done is not None:
        return done
    stack = [t]
    while stack:
        u = stack[-1]
        if "_fv" in u.__dict__:
            stack.pop()
            continue
        if isinstance(u, App):
            f, a = u.fun.__dict__.get("_fv"), u.arg.__dict__.get("_fv")
            if f is None or a is None:
                if f is None:
                    stack.append(u.fun)
                if a is None:
                    stack.append(u.arg)
                continue
            fv = f if not a or a is f else (a if not f else f | a)
        elif isinstance(u, Var):
            fv = frozenset(((u.name, u.ty),))
        else:
            fv = _NO_VARS
        object.__setattr__(u, "_fv", fv)
        stack.pop()
    return t.__dict__["_fv"]


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if isinstance(u, App):
            stack.append(u.arg)
            stack.append(u.fun)


# ---------------------------------------------------------------------------
# Formulas


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class PrimEq(Formula):
    """Intensional equality ``lhs == rhs`` at ``ty``."""
    ty: FiniteType
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class ExtEq(Formula):
    """Extensional equality ``lhs = rhs`` at ``ty``."""
    ty: FiniteType
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Ext(Formula):
    ty: FiniteType
    term: Term


@dataclass(frozen=True)
class Falsum(Formula):
    pass


FALSUM = Falsum()


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    ty: FiniteType
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    ty: FiniteType
    body: Formula


Syntax = Union[FiniteType, Term, Formula]


def free_vars(x: Union[Term, Formula]) -> frozenset:
    """Free variables as a set of ``(name, type)`` pairs."""
    if isinstance(x, Term):
        return _term_free_vars(x)
    if isinstance(x, (PrimEq, ExtEq)):
        return free_vars(x.lhs) | free_vars(x.rhs)
    if isinstance(x, Ext):
        return free_vars(x.term)
    if isinstance(x, Falsum):
        return frozenset()
    if isinstance(x, (And, Or, Imp)):
        return free_vars(x.left) | free_vars(x.right)
    if isinstance(x, (Forall, Exists)):
        return free_vars(x.body) - {(x.var, x.ty)}
    raise TypeError(f"not a term or formula: {x!r}")


# ---------------------------------------------------------------------------
# Lexer


class ParseError(ValueError):
    def __init__(self, message: str, pos: int = 0, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op>->|==|[=*()\[\],.:\\&|])
  | (?P<num>[0-9]+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
""", re.VERBOSE)

COMBINATORS = {"K": Kind.K, "S": Kind.S, "PAIR": Kind.PAIR, "FST": Kind.FST,
               "SND": Kind.SND, "SUC": Kind.SUCC, "REC": Kind.REC}
KEYWORDS = set(COMBINATORS) | {"N", "ext", "false", "forall", "exists", "forallE", "existsE"}


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _lex(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


# ---------------------------------------------------------------------------
# Pre-terms with type metavariables (parser-internal)


class _Meta(FiniteType):
    """Unknown type parameter during parsing."""

    __slots__ = ("id",)

    def __init__(self, id_: int):
        object.__setattr__(self, "id", id_)

    def __repr__(self):
        return f"?{self.id}"


@dataclass
class _PVar:
    name: str
    pos: int


@dataclass
class _PConst:
    kind: Kind
    params: list
    pos: int


@dataclass
class _PApp:
    fun: object
    arg: object
    pos: int


@dataclass
class _PLam:
    name: str
    ty: FiniteType
    body: object
    pos: int


class _Parser:
    def __init__(self, text: str, ctx: Optional[dict]):
        self.text = text
        self.toks = _lex(text)
        self.i = 0
        self.ctx = dict(ctx or {})
        self.annotations: dict[str, FiniteType] = {}
        self.subst: dict[int, FiniteType] = {}
        self.nmeta = 0

    # -- token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, pos: Optional[int] = None):
        raise ParseError(message, self.tok.pos if pos is None else pos, self.text)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def eat(self, text: str) -> _Tok:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        tok = self.tok
        self.i += 1
        return tok

    def ident(self) -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.text in KEYWORDS:
            self.error(f"expected identifier, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok.text

    def expect_eof(self):
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")

    # -- types
    def type_(self) -> FiniteType:
        left = self.prod_type()
        if self.at("->"):
            self.i += 1
            return Arrow(left, self.type_())
        return left

    def prod_type(self) -> FiniteType:
        ty = self.atom_type()
        while self.at("*"):
            self.i += 1
            ty = Prod(ty, self.atom_type())
        return ty

    def atom_type(self) -> FiniteType:
        if self.at("N"):
            self.i += 1
            return NAT
        if self.at("("):
            self.i += 1
            ty = self.type_()
            self.eat(")")
            return ty
        self.error(f"expected a type, found {self.tok.text or 'end of input'!r}")

    # -- terms
    def _starts_atom(self) -> bool:
        tok = self.tok
        if tok.kind == "num":
            return True
        if tok.kind == "ident":
            return tok.text in COMBINATORS or tok.text not in KEYWORDS
        return tok.text in ("(", "\\")

    def term(self):
        pos = self.tok.pos
        if not self._starts_atom():
            self.error(f"expected a term, found {self.tok.text or 'end of input'!r}")
        t = self.atom_term()
        while self._starts_atom():
            t = _PApp(t, self.atom_term(), pos)
        return t

    def atom_term(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            t = _PConst(Kind.ZERO, [], tok.pos)
            for _ in range(int(tok.text)):
                t = _PApp(_PConst(Kind.SUCC, [], tok.pos), t, tok.pos)
            return t
        if tok.text == "\\":
            self.i += 1
            name = self.ident()
            self.eat(":")
            ty = self.type_()
            self.eat(".")
            return _PLam(name, ty, self.term(), tok.pos)
        if tok.text == "(":
            self.i += 1
            t = self.term()
            self.eat(")")
            return t
        if tok.text in COMBINATORS:
            self.i += 1
            kind = COMBINATORS[tok.text]
            if self.at("["):
                self.i += 1
                params = [self.type_()]
                while self.at(","):
                    self.i += 1
                    params.append(self.type_())
                self.eat("]")
                if len(params) != ARITY[kind]:
                    self.error(f"{tok.text} takes {ARITY[kind]} type parameters", tok.pos)
            else:
                params = [self.fresh() for _ in range(ARITY[kind])]
            return _PConst(kind, params, tok.pos)
        name = self.ident()
        if self.at(":"):
            self.i += 1
            ty = self.type_()
            known = self.annotations.get(name, self.ctx.get(name))
            if known is not None and known != ty:
                self.error(f"variable {name} annotated {pretty(ty)} but has type {pretty(known)}",
                           tok.pos)
            self.annotations[name] = ty
        return _PVar(name, tok.pos)

    # -- type inference over pre-terms
    def fresh(self) -> _Meta:
        self.nmeta += 1
        return _Meta(self.nmeta)

    def walk(self, ty: FiniteType) -> FiniteType:
        while isinstance(ty, _Meta) and ty.id in self.subst:
            ty = self.subst[ty.id]
        return ty

    def zonk(self, ty: FiniteType) -> FiniteType:
        ty = self.walk(ty)
        if isinstance(ty, Prod):
            return Prod(self.zonk(ty.left), self.zonk(ty.right))
        if isinstance(ty, Arrow):
            return Arrow(self.zonk(ty.dom), self.zonk(ty.cod))
        return ty

    def occurs(self, m: _Meta, ty: FiniteType) -> bool:
        ty = self.walk(ty)
        if isinstance(ty, _Meta):
            return ty.id == m.id
        if isinstance(ty, Prod):
            return self.occurs(m, ty.left) or self.occurs(m, ty.right)
        if isinstance(ty, Arrow):
            return self.occurs(m, ty.dom) or self.occurs(m, ty.cod)
        return False

    def unify(self, a: FiniteType, b: FiniteType, pos: int):
        a, b = self.walk(a), self.walk(b)
        if isinstance(a, _Meta) and isinstance(b, _Meta) and a.id == b.id:
            return
        if isinstance(a, _Meta):
            if self.occurs(a, b):
                self.error("cyclic type", pos)
            self.subst[a.id] = b
        elif isinstance(b, _Meta):
            self.unify(b, a, pos)
        elif isinstance(a, Nat) and isinstance(b, Nat):
            pass
        elif isinstance(a, Prod) and isinstance(b, Prod):
            self.unify(a.left, b.left, pos)
            self.unify(a.right, b.right, pos)
        elif isinstance(a, Arrow) and isinstance(b, Arrow):
            self.unify(a.dom, b.dom, pos)
            self.unify(a.cod, b.cod, pos)
        else:
            self.error(f"type mismatch: {_show_meta(self.zonk(a))} vs {_show_meta(self.zonk(b))}",
                       pos)

    def infer(self, t, env: dict) -> FiniteType:
        from .typecheck import combinator_type
        if isinstance(t, _PVar):
            if t.name in env:
                return env[t.name]
            if t.name in self.annotations:
                return self.annotations[t.name]
            if t.name in self.ctx:
                return self.ctx[t.name]
            self.error(f"unbound variable {t.name}", t.pos)
        if isinstance(t, _PConst):
            return combinator_type(t.kind, t.params)
        if isinstance(t, _PApp):
            f = self.infer(t.fun, env)
            a = self.infer(t.arg, env)
            cod = self.fresh()
            self.unify(f, Arrow(a, cod), t.pos)
            return cod
        if isinstance(t, _PLam):
            inner = dict(env)
            inner[t.name] = t.ty
            return Arrow(t.ty, self.infer(t.body, inner))
        raise AssertionError(t)

    def resolve(self, t, env: dict) -> Term:
        from .typecheck import lambda_abstract
        if isinstance(t, _PVar):
            ty = env.get(t.name) or self.annotations.get(t.name) or self.ctx[t.name]
            return Var(t.name, ty)
        if isinstance(t, _PConst):
            params = [self.zonk(p) for p in t.params]
            if any(_has_meta(p) for p in params):
                self.error(f"cannot infer the type parameters of {_kind_text(t.kind)}; "
                           f"write them explicitly, e.g. {_kind_text(t.kind)}[...]", t.pos)
            return Const(t.kind, tuple(params))
        if isinstance(t, _PApp):
            return App(self.resolve(t.fun, env), self.resolve(t.arg, env))
        if isinstance(t, _PLam):
            inner = dict(env)
            inner[t.name] = t.ty
            return lambda_abstract(t.name, t.ty, self.resolve(t.body, inner))
        raise AssertionError(t)

    def finish_term(self, t, env: dict, expected: Optional[FiniteType] = None) -> Term:
        ty = self.infer(t, env)
        if expected is not None:
            self.unify(ty, expected, getattr(t, "pos", 0))
        return self.resolve(t, env)

    # -- formulas
    def formula(self, env: dict) -> Formula:
        left = self.disj(env)
        if self.at("->"):
            self.i += 1
            return Imp(left, self.formula(env))
        return left

    def disj(self, env: dict) -> Formula:
        f = self.conj(env)
        while self.at("|"):
            self.i += 1
            f = Or(f, self.conj(env))
        return f

    def conj(self, env: dict) -> Formula:
        f = self.unary(env)
        while self.at("&"):
            self.i += 1
            f = And(f, self.unary(env))
        return f

    def unary(self, env: dict) -> Formula:
        tok = self.tok
        if tok.kind == "ident" and tok.text in ("forall", "exists", "forallE", "existsE"):
            self.i += 1
            name = self.ident()
            self.eat(":")
            ty = self.type_()
            self.eat(".")
            inner = dict(env)
            inner[name] = ty
            body = self.formula(inner)
            if tok.text == "forall":
                return Forall(name, ty, body)
            if tok.text == "exists":
                return Exists(name, ty, body)
            guard = Ext(ty, Var(name, ty))
            if tok.text == "forallE":
                return Forall(name, ty, Imp(guard, body))
            return Exists(name, ty, And(guard, body))
        if self.at("false"):
            self.i += 1
            return FALSUM
        if self.at("ext"):
            self.i += 1
            self.eat("(")
            start = self.tok.pos
            pt = self.term()
            self.eat(")")
            ty = self.infer(pt, env)
            ty = self.zonk(ty)
            if _has_meta(ty):
                self.error("cannot infer the type of the ext argument", start)
            return Ext(ty, self.resolve(pt, env))
        if self.at("("):
            save = self.i, dict(self.annotations), dict(self.subst)
            try:
                return self.equation(env)
            except ParseError as first:
                self.i, self.annotations, self.subst = save[0], save[1], save[2]
                try:
                    self.i += 1
                    f = self.formula(env)
                    self.eat(")")
                    return f
                except ParseError as second:
                    raise first if first.pos >= second.pos else second
        return self.equation(env)

    def equation(self, env: dict) -> Formula:
        pos = self.tok.pos
        lhs = self.term()
        if self.at("=="):
            cls = PrimEq
        elif self.at("="):
            cls = ExtEq
        else:
            self.error(f"expected '==' or '=', found {self.tok.text or 'end of input'!r}")
        self.i += 1
        rhs = self.term()
        a = self.infer(lhs, env)
        b = self.infer(rhs, env)
        self.unify(a, b, pos)
        ty = self.zonk(a)
        if _has_meta(ty):
            self.error("cannot infer the type of this equation", pos)
        return cls(ty, self.resolve(lhs, env), self.resolve(rhs, env))


def _has_meta(ty: FiniteType) -> bool:
    if isinstance(ty, _Meta):
        return True
    if isinstance(ty, Prod):
        return _has_meta(ty.left) or _has_meta(ty.right)
    if isinstance(ty, Arrow):
        return _has_meta(ty.dom) or _has_meta(ty.cod)
    return False


def _show_meta(ty: FiniteType) -> str:
    if isinstance(ty, _Meta):
        return repr(ty)
    if isinstance(ty, Prod):
        return f"({_show_meta(ty.left)} * {_show_meta(ty.right)})"
    if isinstance(ty, Arrow):
        return f"({_show_meta(ty.dom)} -> {_show_meta(ty.cod)})"
    return "N"


def _kind_text(kind: Kind) -> str:
    return kind.value


def parse_type(text: str) -> FiniteType:
    p = _Parser(text, None)
    ty = p.type_()
    p.expect_eof()
    return ty


def parse_term(text: str, ctx: Optional[dict] = None,
               expected: Optional[FiniteType] = None) -> Term:
    """Parse a term; ``ctx`` maps free variable names to their types.

    Combinator type parameters left implicit are inferred; parsing fails if
    the surrounding term does not determine them.
    """
    p = _Parser(text, ctx)
    t = p.term()
    p.expect_eof()
    return p.finish_term(t, {}, expected)


def parse_formula(text: str, ctx: Optional[dict] = None) -> Formula:
    p = _Parser(text, ctx)
    f = p.formula({})
    p.expect_eof()
    return f


# ---------------------------------------------------------------------------
# Printer


def _type_str(ty: FiniteType, prec: int, sp: str) -> str:
    # prec 0: arrow position, 1: left of '*', 2: right of '*'/atom
    if isinstance(ty, Nat):
        return "N"
    if isinstance(ty, Arrow):
        s = f"{_type_str(ty.dom, 1, sp)}{sp}->{sp}{_type_str(ty.cod, 0, sp)}"
        return s if prec == 0 else f"({s})"
    if isinstance(ty, Prod):
        s = f"{_type_str(ty.left, 1, sp)}{sp}*{sp}{_type_str(ty.right, 2, sp)}"
        return s if prec <= 1 else f"({s})"
    raise TypeError(ty)


def _term_str(t: Term, explicit: bool, sp: str) -> str:
    n = numeral_value(t)
    if n is not None:
        return str(n)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        name = "SUC" if t.kind is Kind.SUCC else t.kind.value
        if explicit and t.params:
            return name + "[" + ",".join(_type_str(p, 0, sp) for p in t.params) + "]"
        return name
    head, args = spine(t)
    parts = [_term_str(head, explicit, sp)]
    for a in args:
        s = _term_str(a, explicit, sp)
        if isinstance(a, App) and numeral_value(a) is None:
            s = f"({s})"
        parts.append(s)
    return " ".join(parts)


def _show_term(t: Term, sp: str) -> str:
    """Bare combinators when the parser can recover the parameters."""
    bare = _term_str(t, False, sp)
    ctx = {name: ty for name, ty in free_vars(t)}
    try:
        if len(ctx) == len(free_vars(t)) and parse_term(bare, ctx, None) == t:
            return bare
    except ParseError:
        pass
    return _term_str(t, True, sp)


def _show_equation(lhs: Term, rhs: Term, op: str, sp: str) -> str:
    cls = PrimEq if op == "==" else ExtEq
    ctx = {name: ty for name, ty in free_vars(lhs) | free_vars(rhs)}
    for explicit in (False, True):
        s = f"{_term_str(lhs, explicit, sp)}{sp}{op}{sp}{_term_str(rhs, explicit, sp)}"
        if explicit:
            return s
        try:
            f = parse_formula(s, ctx)
            if isinstance(f, cls) and f.lhs == lhs and f.rhs == rhs:
                return s
        except ParseError:
            pass


def _formula_str(f: Formula, ctx: int, sp: str) -> str:
    # levels: 0 quantifier, 1 '->', 2 '|', 3 '&', 4 atom; parenthesize below ctx
    if isinstance(f, Falsum):
        return "false"
    if isinstance(f, PrimEq):
        return _show_equation(f.lhs, f.rhs, "==", sp)
    if isinstance(f, ExtEq):
        return _show_equation(f.lhs, f.rhs, "=", sp)
    if isinstance(f, Ext):
        return f"ext({_show_term(f.term, sp)})"
    if isinstance(f, Imp):
        level = 1
        s = f"{_formula_str(f.left, 2, sp)}{sp}->{sp}{_formula_str(f.right, 1, sp)}"
    elif isinstance(f, Or):
        level = 2
        s = f"{_formula_str(f.left, 2, sp)}{sp}|{sp}{_formula_str(f.right, 3, sp)}"
    elif isinstance(f, And):
        level = 3
        s = f"{_formula_str(f.left, 3, sp)}{sp}&{sp}{_formula_str(f.right, 4, sp)}"
    elif isinstance(f, (Forall, Exists)):
        level = 0
        word = "forall" if isinstance(f, Forall) else "exists"
        body = f.body
        guard = Ext(f.ty, Var(f.var, f.ty))
        if isinstance(f, Forall) and isinstance(body, Imp) and body.left == guard:
            word, body = "forallE", body.right
        elif isinstance(f, Exists) and isinstance(body, And) and body.left == guard:
            word, body = "existsE", body.right
        s = f"{word} {f.var}:{_type_str(f.ty, 0, sp)}. {_formula_str(body, 0, sp)}"
    else:
        raise TypeError(f)
    return s if level >= ctx else f"({s})"


def pretty(x: Syntax, compact: bool = False) -> str:
    """Render a type, term or formula in the surface syntax.

    ``compact`` drops the blanks around infix operators.
    """
    sp = "" if compact else " "
    if isinstance(x, FiniteType):
        return _type_str(x, 0, sp)
    if isinstance(x, Term):
        return _show_term(x, sp)
    if isinstance(x, Formula):
        return _formula_str(x, 0, sp)
    raise TypeError(f"cannot print {x!r}")


# ---------------------------------------------------------------------------
# JSON


def to_json(x: Syntax) -> dict:
    if isinstance(x, Nat):
        return {"type": "nat"}
    if isinstance(x, Prod):
        return {"type": "prod", "left": to_json(x.left), "right": to_json(x.right)}
    if isinstance(x, Arrow):
        return {"type": "arrow", "dom": to_json(x.dom), "cod": to_json(x.cod)}
    if isinstance(x, Var):
        return {"term": "var", "name": x.name, "ty": to_json(x.ty)}
    if isinstance(x, Const):
        return {"term": "const", "kind": x.kind.name, "params": [to_json(p) for p in x.params]}
    if isinstance(x, App):
        return {"term": "app", "fun": to_json(x.fun), "arg": to_json(x.arg)}
    if isinstance(x, (PrimEq, ExtEq)):
        return {"formula": "primeq" if isinstance(x, PrimEq) else "exteq",
                "ty": to_json(x.ty), "lhs": to_json(x.lhs), "rhs": to_json(x.rhs)}
    if isinstance(x, Ext):
        return {"formula": "ext", "ty": to_json(x.ty), "term": to_json(x.term)}
    if isinstance(x, Falsum):
        return {"formula": "false"}
    if isinstance(x, (And, Or, Imp)):
        return {"formula": type(x).__name__.lower(),
                "left": to_json(x.left), "right": to_json(x.right)}
    if isinstance(x, (Forall, Exists)):
        return {"formula": type(x).__name__.lower(), "var": x.var,
                "ty": to_json(x.ty), "body": to_json(x.body)}
    raise TypeError(f"cannot serialize {x!r}")


def from_json(d: dict) -> Syntax:
    # formula nodes first: an ext node also has a "term" field
    if "formula" in d:
        tag = d["formula"]
        if tag in ("primeq", "exteq"):
            cls = PrimEq if tag == "primeq" else ExtEq
            return cls(from_json(d["ty"]), from_json(d["lhs"]), from_json(d["rhs"]))
        if tag == "ext":
            return Ext(from_json(d["ty"]), from_json(d["term"]))
        if tag == "false":
            return FALSUM
        if tag in ("and", "or", "imp"):
            cls = {"and": And, "or": Or, "imp": Imp}[tag]
            return cls(from_json(d["left"]), from_json(d["right"]))
        if tag in ("forall", "exists"):
            cls = Forall if tag == "forall" else Exists
            return cls(d["var"], from_json(d["ty"]), from_json(d["body"]))
    elif "type" in d:
        tag = d["type"]
        if tag == "nat":
            return NAT
        if tag == "prod":
            return Prod(from_json(d["left"]), from_json(d["right"]))
        if tag == "arrow":
            return Arrow(from_json(d["dom"]), from_json(d["cod"]))
    elif "term" in d:
        tag = d["term"]
        if tag == "var":
            return Var(d["name"], from_json(d["ty"]))
        if tag == "const":
            return Const(Kind[d["kind"]], tuple(from_json(p) for p in d["params"]))
        if tag == "app":
            return App(from_json(d["fun"]), from_json(d["arg"]))
    raise ValueError(f"malformed AST node: {d!r}")
