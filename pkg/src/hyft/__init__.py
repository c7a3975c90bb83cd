"""Combinatory arithmetic in all finite types, with its hybrid extensions and translations."""

from .alpha import (
    AlphaVarMap, alpha_combinator, alpha_formula, alpha_term, apartness_split_term,
    apartness_sym_term, app_formula, cext_witness, dom_formula, star_app, type_minus, type_plus,
)
from .hybrid import (
    cext_axiom, ee_translate, exteq_def_formula, exteq_unfold, ext_axiom, ext_def_formula,
    ext_prime_axiom, hybrid_axioms, mr_translate, star_embed, star_translate, unfold_eq,
)
from .model import DomainSpec, Outcome, Verdict, enumerate_domain, eval_formula
from .retract import (
    Retraction, nat_prod_iso, retract_base, retract_compose, retract_curry, retract_funpair,
    retract_postcompose, retract_prod, retract_to_fun0,
)
from .rewrite import (
    Equality, NormalizeOutcome, Status, arith_library, eval_nat, normalize, step, term_eq_norm,
)
from .syntax import (
    NAT, And, App, Arrow, Const, Exists, Ext, ExtEq, FALSUM, Falsum, FiniteType, Forall,
    Formula, Imp, Kind, Nat, Or, ParseError, PrimEq, Prod, Term, Var, free_vars,
    parse_formula, parse_term, parse_type, pretty,
)
from .typecheck import (
    TypeCheckError, combinator_type, lambda_abstract, substitute_formula, substitute_term,
    type_of, zero_term,
)

__version__ = "0.1.0"
