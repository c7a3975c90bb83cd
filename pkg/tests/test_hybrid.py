import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gen import FormulaGen, TermGen, types_of_height
from hyft.hybrid import (
    StarError, cext_axiom, cext_witness_type, ee_translate, exists_ext, ext_axiom,
    ext_def_formula, ext_prime_axiom, exteq_def_formula, exteq_unfold, forall_ext,
    has_hybrid_atoms, hybrid_axioms, imps, mr_translate, quantifiers_guarded,
    star_embed, star_translate, top, unfold_eq,
)
from hyft.model import DomainSpec, eval_formula
from hyft.rewrite import Equality, normalize, term_eq_norm
from hyft.syntax import (
    FALSUM, NAT, And, Arrow, Ext, ExtEq, Forall, Exists, Imp, PrimEq, Prod, Var, free_vars,
    numeral, parse_formula, parse_type, pretty,
)
from hyft.build import fst, snd
from hyft.typecheck import check_formula, substitute_formula

N = NAT
NN = Arrow(N, N)
settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def p(text, **ctx):
    return parse_formula(text, {k: parse_type(v) for k, v in ctx.items()})


def test_hybrid_axioms_contents():
    axioms = hybrid_axioms(N, N)
    assert p("forall x:N. ext(x)") in axioms
    fa = p("forall f:N->N. forall x:N. ext(f) -> ext(x) -> ext(f x)")
    assert fa in axioms
    assert p("forall x:N. forall y:N. x == y -> ext(x) -> ext(y)") in axioms
    eq_ext = p("forall x:N. forall y:N. x = y -> ext(x) -> ext(y)")
    assert eq_ext not in axioms
    assert eq_ext in hybrid_axioms(N, N, include_eq_ext=True)


def test_axiom_schemas_at_base():
    assert ext_axiom(N, N) == p(
        "forall f:N->N. forall x:N. forall y:N. ext(f) -> ext(x) -> ext(y) -> x = y -> f x = f y")
    fp = ext_prime_axiom(N, N)
    assert isinstance(fp, Forall) and fp.ty == parse_type("(N->N)->N->N")
    cext = cext_axiom(N, N)
    assert isinstance(cext, Exists)
    assert cext.ty == parse_type("((N->N)->N->N)->(N->N)->(N->N)->N->N")
    assert cext_witness_type(N, N) == cext.ty


def test_every_axiom_instance_is_closed_and_typed():
    small = types_of_height(2)
    for sigma, tau in itertools.product(small, repeat=2):
        for f in hybrid_axioms(sigma, tau, include_eq_ext=True):
            check_formula(f, closed=True)
        for f in (ext_axiom(sigma, tau), ext_prime_axiom(sigma, tau), cext_axiom(sigma, tau)):
            check_formula(f, closed=True)


@given(st.sampled_from(types_of_height(3)), st.sampled_from(types_of_height(3)))
def test_axiom_instances_at_deeper_types(sigma, tau):
    for f in hybrid_axioms(sigma, tau, include_eq_ext=True):
        check_formula(f, closed=True)
    for f in (ext_axiom(sigma, tau), ext_prime_axiom(sigma, tau), cext_axiom(sigma, tau)):
        check_formula(f, closed=True)


def test_star_examples():
    x, y = Var("x", N), Var("y", N)
    assert star_translate(PrimEq(N, x, y)) == ExtEq(N, x, y)
    assert star_translate(FALSUM) == FALSUM
    body = PrimEq(N, x, x)
    assert star_translate(Forall("x", N, body)) == forall_ext(x, ExtEq(N, x, x))
    assert star_translate(Exists("x", N, body)) == exists_ext(x, ExtEq(N, x, x))
    with pytest.raises(StarError):
        star_translate(Ext(N, x))


def test_star_embed_guards_free_variables():
    fv, f = star_embed(p("f 0 == x", f="N->N", x="N"))
    assert [n for n, _ in fv] == ["f", "x"]
    assert f == p("ext(f) -> ext(x) -> f 0 = x", f="N->N", x="N")


def test_ee_examples():
    x, y = Var("x", N), Var("y", N)
    assert ee_translate(PrimEq(N, x, y)) == PrimEq(N, x, y)
    assert ee_translate(Ext(N, x)) == top()
    px, py = Var("x", Prod(N, N)), Var("y", Prod(N, N))
    assert ee_translate(ExtEq(Prod(N, N), px, py)) == And(
        PrimEq(N, fst(px), fst(py)), PrimEq(N, snd(px), snd(py)))
    f, g = Var("f", NN), Var("g", NN)
    assert exteq_def_formula(NN, f, g) == p("forall x:N. 0 == 0 -> f x == g x", f="N->N", g="N->N")
    assert pretty(ext_def_formula(NN, f)) == (
        "(forall x:N. 0 == 0 -> 0 == 0) & "
        "(forall x:N. forall y:N. x == y -> 0 == 0 -> 0 == 0 -> f x == f y)")


def test_unfold_examples():
    x, y = Var("x", N), Var("y", N)
    f, g = Var("f", NN), Var("g", NN)
    assert exteq_unfold(NN, f, g) == p("forall u:N. ext(u) -> f u == g u", f="N->N", g="N->N")
    assert exteq_unfold(N, x, y) == PrimEq(N, x, y)
    px, py = Var("x", Prod(N, N)), Var("y", Prod(N, N))
    assert exteq_unfold(Prod(N, N), px, py) == And(
        PrimEq(N, fst(px), fst(py)), PrimEq(N, snd(px), snd(py)))
    kept = unfold_eq(p("ext(f) -> f = g", f="N->N", g="N->N"))
    assert isinstance(kept.left, Ext) and not any(
        isinstance(a, ExtEq) for a in _atoms(kept))


def _atoms(f):
    if isinstance(f, (And, Imp)) or type(f).__name__ == "Or":
        return _atoms(f.left) + _atoms(f.right)
    if isinstance(f, (Forall, Exists)):
        return _atoms(f.body)
    return [f]


def test_mr_examples():
    y, z = Var("y", N), Var("z", N)
    assert mr_translate("r", Ext(N, y)) == (N, Ext(N, y))
    assert mr_translate("r", ExtEq(N, y, z)) == (N, ExtEq(N, y, z))
    ty, f = mr_translate("r", p("exists n:N. n == 0"))
    assert ty == N and f == p("r == 0", r="N")
    # the realizer 0 makes it true
    assert eval_formula(substitute_formula(f, "r", numeral(0))).holds
    assert eval_formula(substitute_formula(f, "r", numeral(1))).fails


def test_mr_content_free_bodies_are_translated():
    _, f = mr_translate("r", p("forall n:N. (exists m:N. m == n) -> false"))
    assert f == p("forall n:N. forall y:N. y == n -> false")


@given(st.randoms(use_true_random=False))
def test_ee_output_is_pure(rng):
    f = FormulaGen(rng).formula(3)
    out = ee_translate(f)
    assert not has_hybrid_atoms(out)
    check_formula(out, dict(free_vars(f)))


@given(st.randoms(use_true_random=False))
def test_star_output_is_guarded(rng):
    f = FormulaGen(rng, hybrid=False).formula(3)
    out = star_translate(f)
    assert quantifiers_guarded(out)
    check_formula(out, dict(free_vars(f)))


@given(st.randoms(use_true_random=False))
def test_mr_of_hybrid_atoms_ignores_realizer(rng):
    atom = FormulaGen(rng).atom([])
    if isinstance(atom, (Ext, ExtEq)):
        ty, out = mr_translate("r", atom)
        assert ty == N and "r" not in {n for n, _ in free_vars(out)}


@given(st.randoms(use_true_random=False))
def test_primitive_equality_implies_extensional_at_base(rng):
    s = TermGen(rng).term(N, 3)
    t = normalize(s).result
    assert term_eq_norm(s, t) is Equality.EQUAL
    assert eval_formula(ee_translate(ExtEq(N, s, t))).holds


def test_application_respects_extensional_equality_bounded():
    # ext f, g, x, y with x = y and f = g gives f x = g y, at functions (N->N)->(N->N)
    sigma = NN
    ft = Arrow(sigma, sigma)
    f, g, x, y = Var("f", ft), Var("g", ft), Var("x", sigma), Var("y", sigma)
    body = imps(And(ExtEq(sigma, x, y), ExtEq(ft, f, g)),
                ExtEq(sigma, f(x), g(y)))
    for v in (y, x, g, f):
        body = forall_ext(v, body)
    # the default domains make this quadruple search take minutes
    verdict = eval_formula(ee_translate(body), DomainSpec(nat_bound=4, max_terms=8))
    assert verdict.holds
