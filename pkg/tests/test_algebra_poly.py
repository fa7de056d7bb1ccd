from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypercf.algebra import (
    DEG_ZERO,
    FieldCtx,
    InexactDivisionError,
    Poly,
    PolyParseError,
    format_poly,
    parse_poly,
    poly_divmod,
    poly_gcd,
    poly_pow,
)
from tests.conftest import field_ctx, polys

F3 = FieldCtx(3)


def P(text, ctx=F3):
    return parse_poly(text, ctx)


def test_long_division_examples():
    assert poly_divmod(P("T^3+2*T+1"), P("T^2+1")) == (P("T"), P("T+1"))
    x = P("2*T^4+T+1")
    assert poly_divmod(x, Poly.one(F3)) == (x, Poly.zero(F3))
    assert poly_divmod(P("2*T"), P("T^2")) == (Poly.zero(F3), P("2*T"))


def test_long_division_example_by_multiplication():
    q, r = poly_divmod(P("T^3+2*T+1"), P("T^2+1"))
    assert q * P("T^2+1") + r == P("T^3+2*T+1")


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        poly_divmod(P("T"), Poly.zero(F3))


def test_powers():
    assert poly_pow(P("2*T"), 3) == P("2*T^3")
    assert poly_pow(P("T+1"), 3) == P("T^3+1")
    assert poly_pow(P("T^2+T+2"), 0) == Poly.one(F3)
    # the Frobenius fast path agrees with repeated multiplication
    x = P("T^2+2*T+1")
    assert poly_pow(x, 9) == x * x * x * x * x * x * x * x * x


def test_zero_degree_marker():
    z = Poly.zero(F3)
    assert z.degree == DEG_ZERO
    assert z.degree < 0 and z.degree != -1
    assert P("1").degree == 0


def test_exact_division_and_shift():
    assert P("T^3+T").exact_div(P("T")) == P("T^2+1")
    with pytest.raises(InexactDivisionError):
        P("T^3+1").exact_div(P("T"))
    with pytest.raises(InexactDivisionError):
        P("T+1").shift(-1)


def test_gcd():
    a = P("T^2+1") * P("T+2")
    b = P("T^2+1") * P("T")
    assert poly_gcd(a, b) == P("T^2+1")


def test_grammar_examples_and_errors():
    assert format_poly(P("2*T^2 + T + 1")) == "2*T^2+T+1"
    assert P("T + T") == P("2*T")
    with pytest.raises(PolyParseError):
        P("4*T")  # coefficients are residues in [0, p)
    with pytest.raises(PolyParseError) as err:
        P("2**T")
    assert err.value.column == 2
    with pytest.raises(PolyParseError):
        P("T^")
    with pytest.raises(PolyParseError):
        P("")


def test_extension_field_grammar():
    f9 = FieldCtx(3, 2, (1, 0, 1))
    x = parse_poly("(1,2)*T^2+(0,1)", f9)
    assert parse_poly(format_poly(x), f9) == x
    assert x.leading_coeff() == f9.element((1, 2))
    assert parse_poly("2*T+0", f9) == Poly.constant(f9, 2) * Poly.T(f9)
    assert parse_poly("0", f9).is_zero()


@given(st.data())
def test_divmod_round_trip(data):
    ctx = data.draw(field_ctx())
    num = data.draw(polys(ctx, max_deg=10))
    den = data.draw(polys(ctx, max_deg=5, nonzero=True))
    q, r = poly_divmod(num, den)
    assert q * den + r == num
    assert r.is_zero() or r.degree < den.degree


@given(st.data())
def test_ring_laws_and_format_round_trip(data):
    ctx = data.draw(field_ctx())
    a, b, c = (data.draw(polys(ctx, max_deg=5)) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a * b).degree == (DEG_ZERO if a.is_zero() or b.is_zero() else a.degree + b.degree)
    assert parse_poly(format_poly(a), ctx) == a


@given(st.data())
def test_frobenius_on_polynomials(data):
    ctx = data.draw(field_ctx())
    a = data.draw(polys(ctx, max_deg=4))
    b = data.draw(polys(ctx, max_deg=4))
    p = ctx.p
    assert poly_pow(a + b, p) == poly_pow(a, p) + poly_pow(b, p)
    assert poly_pow(a, p) == a.frobenius(1)
