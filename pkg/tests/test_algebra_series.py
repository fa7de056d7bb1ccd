from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypercf.algebra import (
    FieldCtx,
    LaurentSeries,
    Poly,
    PrecisionError,
    evaluate_polynomial,
    hensel_root,
    parse_poly,
    series_inverse,
    series_poly_part,
    series_pow_frobenius,
)
from tests.conftest import field_ctx

F3 = FieldCtx(3)


def S(terms, prec=None, ctx=F3):
    return LaurentSeries.from_terms(ctx, terms, prec)


@st.composite
def series(draw, ctx, max_len=12):
    n = draw(st.integers(1, max_len))
    top = draw(st.integers(-5, 5))
    cs = [draw(st.integers(1, ctx.q - 1))] + draw(st.lists(st.integers(0, ctx.q - 1), min_size=n - 1, max_size=n - 1))
    return LaurentSeries(ctx, top, cs, top - n)


def test_inverse_examples():
    assert S({-1: 1}).inverse() == S({1: 1})
    inv = S({0: 1, -1: 1}, prec=-8).inverse()
    assert inv.window(0, -5) == [1, 2, 1, 2, 1, 2]
    assert (inv * S({0: 1, -1: 1}, prec=-8)).agrees_with(LaurentSeries.one(F3))
    c = S({0: 2})
    assert series_inverse(c) == S({0: 2})  # 2 * 2 = 1 in F_3


def test_frobenius_power_examples():
    assert series_pow_frobenius(S({-1: 1, -3: 1}), 3) == S({-3: 1, -9: 1})
    f = S({2: 1, -4: 2}, prec=-6)
    assert series_pow_frobenius(f, 1) == f
    assert series_pow_frobenius(S({-1: 2}), 3) == S({-3: 2})
    with pytest.raises(ValueError):
        series_pow_frobenius(f, 2)


def test_frobenius_scales_precision():
    f = S({-1: 1}, prec=-5)
    assert series_pow_frobenius(f, 3).prec == -15


def test_polynomial_part_examples():
    assert series_poly_part(S({2: 1, 0: 1, -1: 2}))[0] == parse_poly("T^2+1", F3)
    part, positive = series_poly_part(S({-1: 1, -3: 1}))
    assert part.is_zero() and not positive
    assert series_poly_part(S({1: 1, -1: 1}))[0] == Poly.T(F3)


def test_polynomial_part_needs_known_constant_term():
    with pytest.raises(PrecisionError):
        S({2: 1, 1: 1}, prec=0).poly_part()
    assert S({2: 1, 1: 1}, prec=-1).poly_part() == parse_poly("T^2+T", F3)


def test_precision_is_exclusive_and_propagates():
    f = S({0: 1, -1: 1}, prec=-3)
    assert f.coefficient(-2) == 0
    with pytest.raises(PrecisionError):
        f.coefficient(-3)
    g = S({0: 1}, prec=-10)
    assert (f + g).prec == -3
    assert (f * S({2: 1}, prec=-1)).prec == min(-3 + 2, -1 + 0)
    assert f.shift(4).prec == 1


def test_zero_to_precision():
    z = S({-7: 1}, prec=-4)
    assert z.is_zero() and z.prec == -4
    with pytest.raises(ZeroDivisionError):
        z.inverse()


def test_exact_multi_term_inverse_needs_precision():
    with pytest.raises(PrecisionError):
        S({0: 1, -1: 1}).inverse()
    assert S({0: 1, -1: 1}).inverse(rel_prec=4).prec == -4


def test_rational_expansion_against_long_division():
    num, den = parse_poly("T^2+1", F3), parse_poly("T^3+2*T+2", F3)
    f = LaurentSeries.from_rational(num, den, -30)
    assert (f * LaurentSeries.from_poly(den)).agrees_with(LaurentSeries.from_poly(num), down_to=-27)


def test_evaluate_polynomial_matches_horner():
    x = S({1: 1, -1: 2, -2: 1}, prec=-20)
    coeffs = {4: Poly.one(F3), 2: Poly.one(F3), 1: -Poly.T(F3), 0: Poly.one(F3)}
    fast = evaluate_polynomial(coeffs, x)
    slow = ((x * x * x * x) + (x * x)) - x * LaurentSeries.from_poly(Poly.T(F3)) + LaurentSeries.one(F3)
    assert fast.agrees_with(slow)


def test_hensel_root_of_quadratic_matches_periodic_cf_value():
    # X^2 - T X - 1 = 0 has the root [T, T, T, ...] = T + 1/(T + 1/(T + ...))
    T = Poly.T(F3)
    coeffs = {2: Poly.one(F3), 1: -T, 0: -Poly.one(F3)}
    root = hensel_root(coeffs, S({1: 1}), 60)
    assert root.prec <= -60
    assert evaluate_polynomial(coeffs, root).is_zero()
    # compare against the value of the convergent x_n / y_n
    xs, ys = [Poly.one(F3), T], [Poly.zero(F3), Poly.one(F3)]
    for _ in range(40):
        xs.append(T * xs[-1] + xs[-2])
        ys.append(T * ys[-1] + ys[-2])
    conv = LaurentSeries.from_rational(xs[-1], ys[-1], -60)
    assert root.agrees_with(conv, down_to=-59)


@given(st.data())
def test_inverse_round_trip(data):
    ctx = data.draw(field_ctx())
    f = data.draw(series(ctx))
    prod = f * f.inverse()
    assert prod.agrees_with(LaurentSeries.one(ctx))
    assert prod.rel_prec == f.rel_prec


@given(st.data())
def test_frobenius_power_equals_repeated_product(data):
    ctx = data.draw(field_ctx())
    f = data.draw(series(ctx, max_len=10))
    r = ctx.p ** data.draw(st.sampled_from([1, 2]))
    prod = f
    for _ in range(r - 1):
        prod = prod * f
    fast = series_pow_frobenius(f, r)
    assert fast.agrees_with(prod)
    assert fast.top == prod.top


@given(st.data())
def test_arithmetic_laws_to_precision(data):
    ctx = data.draw(field_ctx())
    f, g, h = (data.draw(series(ctx, max_len=8)) for _ in range(3))
    assert (f * (g + h)).agrees_with(f * g + f * h)
    assert (f + g).agrees_with(g + f)
    assert (f - f).is_zero()
