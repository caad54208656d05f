"""Unit and property tests for the exact arithmetic core."""

from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from gsp4verify import symcore as sc
from gsp4verify.symcore import (
    DivisionByZero, LaurentPoly, PoleAtOrigin, PowerSeries, RatFunc,
    SpecializationPole, ell, ratfunc_eq, reconstruct_ratfunc, series_expand,
    substitute, sym, symbols, vee,
)


def test_v_squared_folds_to_l():
    v = LaurentPoly.symbol("v")
    l = LaurentPoly.symbol("l")
    assert v * v == l
    assert v ** 3 == l * v
    assert v ** -1 == l ** -1 * v
    for mono in (v ** 5 * l ** -2).terms:
        assert dict(mono).get("v", 0) in (0, 1)


def test_v_squared_folds_to_concrete_prime():
    v = LaurentPoly.symbol("v", prime=2)
    assert v * v == LaurentPoly.const(2, prime=2)
    assert v ** 3 == LaurentPoly.const(2, prime=2) * v
    assert LaurentPoly.symbol("l", prime=3) == LaurentPoly.const(3, prime=3)


def test_prime_mismatch():
    with pytest.raises(sc.PrimeMismatch):
        LaurentPoly.symbol("x", prime=2) * LaurentPoly.symbol("y", prime=3)


def test_ratfunc_cancellation():
    x = sym("x")
    f = (x ** 2 - 1) / (x - 1)
    assert f.den == LaurentPoly.const(1)
    assert f == x + 1


def test_ratfunc_common_factor_normalizes():
    x, y = symbols("x y")
    a = (x + y) / (x * y)
    b = ((x + y) * (x - y)) / (x * y * (x - y))
    assert a.num == b.num and a.den == b.den


def test_laurent_unit_normalization():
    x = sym("x")
    f = RatFunc(LaurentPoly.const(1), LaurentPoly.symbol("x"))
    assert f == x ** -1
    g = (1 - x) / (x ** -1 - 1)  # (1-x)/((1-x)/x) = x
    assert g == x


def test_division_by_zero():
    x = sym("x")
    with pytest.raises(DivisionByZero):
        x / (x - x)


def test_substitute_basic():
    x, y = symbols("x y")
    f = (x + y) / (x - y)
    g = substitute(f, {"x": 3, "y": 1})
    assert g == RatFunc.const(2)
    with pytest.raises(SpecializationPole):
        substitute(f, {"x": 1, "y": 1})


def test_substitute_l_and_v():
    v = vee()
    f = v * sym("x")
    with pytest.raises(sc.ExactArithmeticError):
        substitute(f, {"l": 4, "x": 1})
    assert substitute(f, {"v": 2, "x": 5}) == RatFunc.const(10)
    # even powers of v are l and substitute fine
    assert substitute(v * v, {"l": 4}) == RatFunc.const(4)
    with pytest.raises(sc.ExactArithmeticError):
        substitute(v, {"l": 4, "v": 3})


def test_series_expand_geometric():
    x = sym("x")
    s = series_expand(1 / (1 - x), "x", 5)
    assert all(c == RatFunc.const(1) for c in s.coeffs)
    t = series_expand((1 + x) / (1 - x) ** 2, "x", 4)
    # (1+x)/(1-x)^2 = sum (2n+1) x^n
    assert [c.const_value() for c in t.coeffs] == [Q(2 * n + 1) for n in range(5)]


def test_series_pole_at_origin():
    x = sym("x")
    with pytest.raises(PoleAtOrigin):
        series_expand(1 / x, "x", 3)
    with pytest.raises(PoleAtOrigin):
        series_expand(1 / (x - x ** 2), "x", 3)


def test_series_with_parameter_coeffs():
    x, a = symbols("x a")
    s = series_expand(1 / (1 - a * x), "x", 6)
    assert s.coeffs[4] == a ** 4


def test_series_arithmetic_truncates():
    x = sym("x")
    s = series_expand(1 / (1 - x), "x", 4)
    t = series_expand(1 - x, "x", 4)
    prod = s * t
    assert prod.coeffs[0] == RatFunc.const(1)
    assert all(c.is_zero() for c in prod.coeffs[1:])


def test_reconstruct_ratfunc():
    x, a = symbols("x a")
    f = (1 - a * x) / ((1 - x) * (1 - 2 * x))
    s = series_expand(f, "x", 9)
    g = reconstruct_ratfunc(s, (1 - x) * (1 - 2 * x), 1)
    assert g == f
    with pytest.raises(sc.ExactArithmeticError):
        reconstruct_ratfunc(s, (1 - x), 1)


def test_ell_helpers():
    assert ell(2) == RatFunc.const(2, 2)
    assert vee(2) ** 2 == RatFunc.const(2, 2)
    assert sc.ell_pow(3) == ell() * vee()
    assert sc.ell_pow(-2) == ell() ** -1


# -- property tests ----------------------------------------------------------

names = st.sampled_from(["x", "y", "z", "v"])


@st.composite
def laurent_polys(draw):
    nterms = draw(st.integers(0, 4))
    terms = {}
    for _ in range(nterms):
        nsym = draw(st.integers(0, 2))
        mono = {}
        for _ in range(nsym):
            mono[draw(names)] = draw(st.integers(-3, 3))
        key = tuple(sorted(mono.items()))
        terms[key] = Q(draw(st.integers(-9, 9)), draw(st.integers(1, 9)))
    return LaurentPoly(terms)


@settings(max_examples=200, deadline=None)
@given(laurent_polys(), laurent_polys(), laurent_polys())
def test_poly_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + LaurentPoly.const(0) == a
    assert a * LaurentPoly.const(1) == a


@settings(max_examples=100, deadline=None)
@given(laurent_polys())
def test_poly_v_exponent_invariant(a):
    for mono in a.terms:
        assert dict(mono).get("v", 0) in (0, 1)


@settings(max_examples=100, deadline=None)
@given(laurent_polys(), laurent_polys(), laurent_polys())
def test_ratfunc_normalization_consistency(a, b, c):
    if b.is_zero():
        return
    f = RatFunc(a, b)
    assert f.num * b == a * f.den  # value preserved
    if not c.is_zero():
        g = RatFunc(a * c, b * c)
        assert g.num == f.num and g.den == f.den  # canonical form


@settings(max_examples=100, deadline=None)
@given(laurent_polys(), laurent_polys(), laurent_polys(), laurent_polys())
def test_ratfunc_field_axioms(a, b, c, d):
    if b.is_zero() or d.is_zero():
        return
    f, g = RatFunc(a, b), RatFunc(c, d)
    assert f + g == g + f
    assert f * g == g * f
    assert f - f == RatFunc.const(0)
    if not g.is_zero():
        assert (f / g) * g == f
