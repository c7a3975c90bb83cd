import pytest
from hypothesis import given, settings, strategies as st

from gen import TermGen, random_type
from hyft.build import ap, num
from hyft.rewrite import (
    Equality, FuelExhausted, NotNumeral, Status, eval_nat, lib, normalize, step,
    term_eq_norm,
)
from hyft.syntax import NAT, App, Arrow, Const, Kind, Prod, Var, numeral, parse_term

N = NAT
NN = Arrow(N, N)
settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def cantor(a, b):
    return (a + b) * (a + b + 1) // 2 + a


def test_single_steps():
    assert step(parse_term("K 0 (SUC 0)")) == numeral(0)
    assert step(parse_term("REC[N] 7 (K[N->N,N] SUC) 0")) == numeral(7)
    assert step(Var("x", N)) is None


def test_normalize_examples():
    assert normalize(parse_term("S[N,N->N,N] K K 5")).result == numeral(5)
    add_zero = parse_term("REC 0 (\\m:N. \\z:N. SUC z) 3")
    assert normalize(add_zero).result == numeral(3)
    x = Var("x", N)
    out = normalize(x)
    assert (out.result, out.steps, out.status) == (x, 0, Status.NORMAL_FORM)


def test_eval_nat_examples():
    assert eval_nat(parse_term("SUC (SUC 0)")) == 2
    assert eval_nat(ap(lib("add"), num(2), num(3))) == 5
    assert eval_nat(parse_term("FST (PAIR 7 1)")) == 7
    assert eval_nat(ap(lib("monus"), num(3), num(5))) == 0


def test_eval_nat_errors():
    with pytest.raises(NotNumeral):
        eval_nat(Var("x", N))
    loop = ap(lib("mul"), num(40), num(40))
    with pytest.raises(FuelExhausted):
        eval_nat(loop, fuel=50)
    out = normalize(loop, fuel=50)
    assert out.status is Status.FUEL_EXHAUSTED and out.result == loop


@pytest.mark.parametrize("a, b", [(a, b) for a in range(10) for b in range(10)])
def test_eq_nat_truth_table(a, b):
    assert eval_nat(ap(lib("eq_nat"), num(a), num(b))) == (0 if a == b else 1)


def test_arithmetic_against_native():
    for a in range(7):
        for b in range(7):
            assert eval_nat(ap(lib("add"), num(a), num(b))) == a + b
            assert eval_nat(ap(lib("mul"), num(a), num(b))) == a * b
            assert eval_nat(ap(lib("monus"), num(a), num(b))) == max(a - b, 0)
    for n in range(12):
        assert eval_nat(ap(lib("half"), num(n))) == n // 2
        assert eval_nat(ap(lib("pred"), num(n))) == max(n - 1, 0)


def test_pairing_bijective_on_grid():
    codes = set()
    for a in range(15):
        for b in range(15):
            code = eval_nat(ap(lib("pair_nat"), num(a), num(b)))
            assert code == cantor(a, b)
            codes.add(code)
            assert eval_nat(ap(lib("unpair_fst"), num(code))) == a
            assert eval_nat(ap(lib("unpair_snd"), num(code))) == b
    assert len(codes) == 225


def test_combinator_equations():
    r, s, t = N, NN, Prod(N, N)
    x, y, z = Var("x", Arrow(r, Arrow(s, t))), Var("y", Arrow(r, s)), Var("z", r)
    S = Const(Kind.S, (r, s, t))
    assert term_eq_norm(App(App(App(S, x), y), z), App(App(x, z), App(y, z))) is Equality.EQUAL
    a, b = Var("a", s), Var("b", t)
    assert term_eq_norm(App(App(Const(Kind.K, (s, t)), a), b), a) is Equality.EQUAL
    assert term_eq_norm(Var("x", N), Var("y", N)) is Equality.DISTINCT
    assert term_eq_norm(ap(lib("mul"), num(40), num(40)), num(1600), fuel=10) is Equality.UNKNOWN


@given(st.integers(0, 200))
def test_numeral_soundness(n):
    assert eval_nat(numeral(n)) == n


@given(st.randoms(use_true_random=False), st.integers(0, 10))
def test_recursor_unfolding(rng, n):
    gen = TermGen(rng)
    base = gen.term(N, 2)
    f = gen.term(Arrow(N, NN), 3)
    R = Const(Kind.REC, (N,))
    lhs = App(App(App(R, base), f), numeral(n + 1))
    rhs = App(App(f, numeral(n)), App(App(App(R, base), f), numeral(n)))
    assert eval_nat(lhs) == eval_nat(rhs)


@given(st.randoms(use_true_random=False))
def test_normalize_is_deterministic(rng):
    ty = random_type(rng, 2)
    t = TermGen(rng, [Var("x", N), Var("f", NN)]).term(ty, 3)
    a, b = normalize(t), normalize(t)
    assert a == b
    assert normalize(a.result).steps == 0


@given(st.randoms(use_true_random=False))
def test_step_and_machine_agree(rng):
    # the naive leftmost-outermost stepper reaches the same normal form
    t = TermGen(rng, [Var("x", N)]).term(random_type(rng, 1), 3)
    target = normalize(t).result
    for _ in range(5000):
        nxt = step(t)
        if nxt is None:
            break
        t = nxt
    assert t == target
