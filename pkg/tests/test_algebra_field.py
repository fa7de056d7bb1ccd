from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypercf.algebra import FieldCtx, FieldElement, FieldMismatchError, field_arith
from tests.conftest import CONTEXTS, codes, field_ctx


def test_small_prime_field_values():
    f3, f5 = FieldCtx(3), FieldCtx(5)
    assert f3(2) + f3(2) == f3(1)
    assert f5(3).inverse() == f5(2)
    assert f3(2) ** 3 == f3(2)
    assert field_arith("add", f3(2), f3(2)) == 1
    assert field_arith("inv", f5(3)) == 2
    assert field_arith("pow", f3(2), 3) == 2


def test_every_element_of_f3_is_fixed_by_cubing():
    f3 = FieldCtx(3)
    assert all(x**3 == x for x in f3.elements())


def test_zero_and_one_are_distinguished():
    for ctx in CONTEXTS:
        assert not ctx.zero and ctx.one
        assert ctx.zero != ctx.one
        assert ctx.one * ctx.one == ctx.one


def test_constructor_rejections():
    with pytest.raises(ValueError):
        FieldCtx(4)
    with pytest.raises(ValueError):
        FieldCtx(2, 2)  # no modulus
    with pytest.raises(ValueError):
        FieldCtx(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2 over F_2
    with pytest.raises(ValueError):
        FieldCtx(3, 1, (1, 1))
    with pytest.raises(ZeroDivisionError):
        FieldCtx(7)(0).inverse()


def test_mixing_fields_is_an_error():
    with pytest.raises(FieldMismatchError):
        FieldCtx(3)(1) + FieldCtx(5)(1)


def test_extension_field_vectors_round_trip():
    f4 = FieldCtx(2, 2, (1, 1, 1))
    x = f4.element((1, 0))  # the generator
    assert x * x == x + f4.one  # x^2 = x + 1
    assert str(x) == "(1,0)"
    assert len({e for e in f4.elements()}) == 4
    assert all(e ** (f4.q - 1) == f4.one for e in f4.nonzero_elements())


def test_multiplicative_group_order():
    for ctx in CONTEXTS:
        for e in ctx.nonzero_elements():
            assert e ** (ctx.q - 1) == ctx.one


@given(st.data())
def test_field_axioms(data):
    ctx = data.draw(field_ctx())
    a, b, c = (FieldElement(ctx, data.draw(codes(ctx))) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + ctx.zero == a and a * ctx.one == a
    assert a + (-a) == ctx.zero
    assert a - b == a + (-b)


@given(st.data())
def test_inverse_laws(data):
    ctx = data.draw(field_ctx())
    a = FieldElement(ctx, data.draw(codes(ctx, nonzero=True)))
    b = FieldElement(ctx, data.draw(codes(ctx, nonzero=True)))
    assert a * a.inverse() == ctx.one
    assert (a * b).inverse() == a.inverse() * b.inverse()
    assert a / b * b == a


@given(st.data())
def test_frobenius_is_additive(data):
    ctx = data.draw(field_ctx())
    x = FieldElement(ctx, data.draw(codes(ctx)))
    y = FieldElement(ctx, data.draw(codes(ctx)))
    p = ctx.p
    assert (x + y) ** p == x**p + y**p
    assert (x * y) ** p == x**p * y**p
    assert ctx.frobenius((x + y).value, p) == ctx.add(ctx.frobenius(x.value, p), ctx.frobenius(y.value, p))
