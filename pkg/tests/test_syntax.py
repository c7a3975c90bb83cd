import json

import pytest
from hypothesis import given, settings, strategies as st

from gen import FormulaGen, TermGen, random_type
from hyft.syntax import (
    NAT, App, Arrow, Const, Ext, Falsum, FALSUM, Forall, Imp, Kind, ParseError, PrimEq,
    Prod, Var, free_vars, from_json, numeral, parse_formula, parse_term, parse_type,
    pretty, to_json,
)
from hyft.typecheck import lambda_abstract

N = NAT
NN = Arrow(N, N)
x, y = Var("x", N), Var("y", N)
settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.mark.parametrize("text, expected", [
    ("N -> N -> N", Arrow(N, Arrow(N, N))),
    ("N * N -> N", Arrow(Prod(N, N), N)),
    ("N", N),
    ("(N -> N) -> N", Arrow(NN, N)),
    ("N * N * N", Prod(Prod(N, N), N)),
])
def test_parse_type(text, expected):
    assert parse_type(text) == expected


@pytest.mark.parametrize("ty, text", [
    (Arrow(N, Arrow(N, N)), "N -> N -> N"),
    (Arrow(NN, N), "(N -> N) -> N"),
    (Prod(N, Prod(N, N)), "N * (N * N)"),
    (Arrow(Prod(N, N), N), "N * N -> N"),
])
def test_print_type(ty, text):
    assert pretty(ty) == text


def test_parse_application_spine():
    t = parse_term("K x y", {"x": N, "y": N})
    assert t == App(App(Const(Kind.K, (N, N)), x), y)
    assert pretty(t) == "K x y"


def test_identity_lambda_compiles_to_skk():
    t = parse_term("\\x:N. x")
    s = Const(Kind.S, (N, NN, N))
    assert t == App(App(s, Const(Kind.K, (N, NN))), Const(Kind.K, (N, N)))


def test_numeral_desugaring():
    assert parse_term("2") == App(Const(Kind.SUCC), App(Const(Kind.SUCC), Const(Kind.ZERO)))
    assert pretty(parse_term("17")) == "17"


def test_parse_formulas():
    assert parse_formula("x == y", {"x": N, "y": N}) == PrimEq(N, x, y)
    f = parse_formula("forallE u:N. x u == y u", {"x": NN, "y": NN})
    u = Var("u", N)
    assert f == Forall("u", N, Imp(Ext(N, u), PrimEq(N, App(Var("x", NN), u),
                                                       App(Var("y", NN), u))))
    assert parse_formula("ext(f)", {"f": NN}) == Ext(NN, Var("f", NN))


def test_print_formula():
    assert pretty(Forall("x", N, FALSUM)) == "forall x:N. false"
    assert isinstance(parse_formula("false"), Falsum)


def test_inline_annotations():
    assert parse_formula("x:N == 0") == PrimEq(N, x, numeral(0))


@pytest.mark.parametrize("text", [
    "K (", "N ->", "x == ", "forall x. x == x", "K[N] 0", "1 2", "FST 0",
])
def test_parse_errors_carry_position(text):
    with pytest.raises((ParseError, TypeError)) as info:
        parse_formula(text) if "==" in text or "forall" in text else parse_term(text)
    if isinstance(info.value, ParseError):
        assert "position" in str(info.value)


def test_ambiguous_parameters_are_rejected():
    with pytest.raises(ParseError, match="cannot infer"):
        parse_term("S K K 5")
    t = parse_term("S[N,N->N,N] K K 5")
    assert pretty(t) == "S[N,N -> N,N] K[N,N -> N] K[N,N] 5"
    assert parse_term(pretty(t)) == t


def test_free_vars():
    assert free_vars(x) == {("x", N)}
    assert free_vars(Forall("x", N, PrimEq(N, x, y))) == {("y", N)}
    t = App(App(Const(Kind.K, (N, N)), x), y)
    assert free_vars(lambda_abstract("x", N, t)) == {("y", N)}


@given(st.randoms(use_true_random=False), st.integers(0, 4))
def test_type_round_trip(rng, size):
    ty = random_type(rng, size)
    assert parse_type(pretty(ty)) == ty
    assert parse_type(pretty(ty, compact=True)) == ty


@given(st.randoms(use_true_random=False))
def test_precedence_product_binds_tighter(rng):
    a, b, c = (pretty(random_type(rng, 2)) for _ in range(3))
    assert parse_type(f"({a})*({b})->({c})") == parse_type(f"(({a})*({b}))->({c})")


@given(st.randoms(use_true_random=False))
def test_term_round_trip(rng):
    ctx = [Var("x", N), Var("f", NN), Var("p", Prod(N, N))]
    ty = random_type(rng, 2)
    t = TermGen(rng, ctx).term(ty, 3)
    env = {v.name: v.ty for v in ctx}
    assert parse_term(pretty(t), env) == t
    assert parse_term(pretty(t, compact=True), env) == t


@given(st.randoms(use_true_random=False))
def test_formula_round_trip(rng):
    f = FormulaGen(rng).formula(3)
    env = {n: ty for n, ty in free_vars(f)}
    assert parse_formula(pretty(f), env) == f
    assert from_json(json.loads(json.dumps(to_json(f)))) == f


@given(st.integers(0, 300))
def test_numeral_coherence(n):
    assert pretty(parse_term(str(n))) == str(n)
