from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from dihedral_bmw.ringcore import (EVEN, ODD, PoleError, canonical_string, conjugate, evaluate,
                                   parse_point, parse_scalar, permute_variables, substitute, tau_odd)

# Scalars are built in parallel with sympy expressions; sympy is the oracle.
SYMS = {name: sp.Symbol(name) for name in ODD.variables + EVEN.variables}


def laurent_terms(ctx):
    exps = st.tuples(*[st.integers(-2, 2) if lau else st.integers(0, 2) for lau in ctx.laurent])
    return st.lists(st.tuples(st.integers(-4, 4), exps), min_size=1, max_size=4)


def build(ctx, terms):
    s, e = ctx.zero(), sp.Integer(0)
    for c, ex in terms:
        t, te = ctx(c), sp.Integer(c)
        for v, k in zip(ctx.variables, ex):
            t = t * ctx.var(v, k) if k >= 0 else t * ctx.var(v).invert() ** (-k)
            te = te * SYMS[v] ** k
        s, e = s + t, e + te
    return s, e


POINT_ODD = {"m": Fraction(3, 7), "l": Fraction(-5, 3)}
POINT_EVEN = {"v0": Fraction(2, 3), "l0": Fraction(-7, 5), "v1": Fraction(5, 11), "l1": Fraction(3, 2)}


def agree(s, e, point):
    want = e.subs({SYMS[k]: sp.Rational(v.numerator, v.denominator) for k, v in point.items()})
    return evaluate(s, point) == Fraction(int(want.p), int(want.q))


@given(laurent_terms(ODD), laurent_terms(ODD), laurent_terms(ODD))
def test_odd_field_ops_match_sympy(a, b, c):
    (x, xe), (y, ye), (z, ze) = build(ODD, a), build(ODD, b), build(ODD, c)
    assert agree(x * y + z, xe * ye + ze, POINT_ODD)
    assert agree(x - y * z, xe - ye * ze, POINT_ODD)
    if not z.is_zero() and sp.simplify(ze).subs({SYMS[k]: v for k, v in POINT_ODD.items()}) != 0:
        assert agree(x / z, xe / ze, POINT_ODD)


@given(laurent_terms(EVEN), laurent_terms(EVEN))
def test_even_field_axioms(a, b):
    (x, _), (y, _) = build(EVEN, a), build(EVEN, b)
    assert x * y == y * x
    assert (x + y) * (x - y) == x * x - y * y
    if not y.is_zero():
        assert (x / y) * y == x


@given(laurent_terms(EVEN))
def test_canonical_string_round_trip(a):
    x, _ = build(EVEN, a)
    assert parse_scalar(EVEN, canonical_string(x)) == x


@given(laurent_terms(ODD), laurent_terms(ODD))
def test_conjugation_is_ring_involution(a, b):
    (x, _), (y, _) = build(ODD, a), build(ODD, b)
    assert conjugate(ODD, conjugate(ODD, x)) == x
    assert conjugate(ODD, x * y) == conjugate(ODD, x) * conjugate(ODD, y)
    assert conjugate(ODD, x + y) == conjugate(ODD, x) + conjugate(ODD, y)


def test_conjugation_rules():
    m, l = ODD.var("m"), ODD.var("l")
    assert conjugate(ODD, m) == -m
    assert conjugate(ODD, l) == l.invert()
    # tau = (l - l^-1)/m + 1 is bar-invariant
    assert conjugate(ODD, tau_odd()) == tau_odd()


def test_canonical_form_is_unique():
    m, l = ODD.var("m"), ODD.var("l")
    a = (m * m - 1) / (m - 1)
    assert a == m + 1
    assert canonical_string(a) == canonical_string(m + 1)
    assert canonical_string(ODD(Fraction(-3, 4))) == "-3/4"


def test_substitute_and_permute():
    v0, v1 = EVEN.var("v0"), EVEN.var("v1")
    assert permute_variables(v0 * v1.invert(), {"v0": "v1", "v1": "v0"}) == v1 * v0.invert()
    s = substitute(ODD.var("m") * ODD.var("l"), ODD, {"m": ODD(2), "l": ODD.var("l")})
    assert s == 2 * ODD.var("l")


def test_evaluate_poles():
    with pytest.raises(PoleError):
        evaluate(ODD.var("l").invert(), {"m": 1, "l": 0})
    with pytest.raises(PoleError):
        evaluate(ODD.one() / (ODD.var("m") - 1), {"m": 1, "l": 2})


def test_parse_point():
    assert parse_point("m=1/2, l=-3") == {"m": Fraction(1, 2), "l": Fraction(-3)}
    with pytest.raises(ValueError):
        parse_point("m")


def test_context_validation():
    from dihedral_bmw.ringcore import RingContext
    with pytest.raises(ValueError):
        RingContext("bad", ("x", "x"), ("id", "id"), (False, False))
    with pytest.raises(ValueError):
        RingContext("bad", ("x",), ("inv",), (False,))
