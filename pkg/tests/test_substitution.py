from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercf.algebra import FieldCtx, LaurentSeries, Poly, evaluate_polynomial, parse_poly
from hypercf.automata import kernel_enumerate, required_prefix
from hypercf.contfrac import approx_exponent_estimate, leading_coeffs
from hypercf.hyperquad import exponent_degrees, u_recursion_generate
from hypercf.substitution import (
    Morphism,
    QuadIntZ2,
    closed_form_l,
    closed_form_m,
    counterexample_report,
    distance_below,
    fixed_point_prefix,
    frequency_check,
    incidence_matrix,
    ln_mn,
    ln_mn_sequences,
    nonautomatic_evidence,
    omega_word,
    perron_eigenvalue,
    quartic_coeffs,
    quartic_expand,
    quartic_morphism,
    quartic_root,
    w_prefix,
    w_sequence,
    w_word,
)

F3 = FieldCtx(3)
T = Poly.T(F3)


def P(text):
    return parse_poly(text, F3)


# -- morphisms ------------------------------------------------------------------------------------


def test_fixed_point_examples():
    m = quartic_morphism()
    word = fixed_point_prefix(m, "a", 11)
    assert "".join(word) == "abcacacabca"
    assert m.output(word) == [1, 2, 2, 1, 2, 1, 2, 1, 2, 2, 1]
    single = Morphism(("a",), {"a": "aa"})
    assert fixed_point_prefix(single, "a", 5) == ["a"] * 5


def test_fixed_point_rejections():
    m = quartic_morphism()
    with pytest.raises(ValueError):
        fixed_point_prefix(m, "b", 4)
    with pytest.raises(ValueError):
        Morphism(("a",), {"a": ""})
    with pytest.raises(ValueError):
        Morphism(("a",), {"a": "ab"})
    with pytest.raises(ValueError):
        Morphism(("a", "b"), {"a": "ab"})


def test_iterates_are_prefixes_and_match_w():
    m = quartic_morphism()
    prev = []
    for n in range(13):
        it = m.iterate("a", n)
        assert it[: len(prev)] == prev
        assert m.output(it) == w_word(n + 1)
        prev = it


def test_incidence_examples():
    assert incidence_matrix(quartic_morphism()).to_lists() == [[2, 1, 0], [1, 0, 0], [1, 1, 1]]
    assert incidence_matrix(Morphism(("a", "b"), {"a": "ab", "b": "ba"})).to_lists() == [[1, 1], [1, 1]]
    assert incidence_matrix(Morphism(("a",), {"a": "aa"})).to_lists() == [[2]]


def test_iterate_lengths_are_column_sums_of_powers():
    m = quartic_morphism()
    M = incidence_matrix(m).as_array()
    ls, _ = ln_mn_sequences(13)
    for n in range(12):
        power = np.linalg.matrix_power(M, n)
        assert len(m.iterate("a", n)) == power[:, 0].sum() == ls[n + 1]


def test_perron_examples():
    res = perron_eigenvalue(incidence_matrix(quartic_morphism()))
    assert abs(res.value - (1 + 2**0.5)) < 1e-9
    assert res.char_poly == (1, -3, 1, 1)
    assert res.factored.replace(" ", "") in ("(lambda-1)*(lambda**2-2*lambda-1)", "(lambda**2-2*lambda-1)*(lambda-1)")
    assert abs(perron_eigenvalue([[2]]).value - 2) < 1e-12
    assert abs(perron_eigenvalue([[1, 1], [1, 1]]).value - 2) < 1e-12


def test_perron_rejections():
    with pytest.raises(ValueError):
        perron_eigenvalue([[1, -1], [0, 1]])
    with pytest.raises(ValueError):
        perron_eigenvalue([[1, 2, 3], [4, 5, 6]])
    slow = perron_eigenvalue([[1, 0], [1, 1]], max_iter=1000)  # Jordan block: 1/k convergence
    assert not slow.converged and abs(slow.value - 1) < 1e-2


@settings(max_examples=300)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(st.integers(1, 5), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_perron_matches_numpy_on_positive_matrices(rows):
    # positive matrices have a simple dominant eigenvalue with a spectral gap
    expect = max(abs(np.linalg.eigvals(np.array(rows, dtype=float))))
    res = perron_eigenvalue(rows, exact=False)
    assert res.converged
    assert abs(res.value - expect) < 1e-9 * expect


# -- Z[sqrt 2] and the counts -----------------------------------------------------------------------


def test_ln_mn_examples():
    ls, ms = ln_mn_sequences(6)
    assert ls == [0, 1, 4, 11, 28, 69, 168]
    assert ms == [0, 0, 2, 6, 16, 40, 98]
    assert closed_form_l(1) == 1 and closed_form_m(1) == 0
    v = ln_mn(10)
    assert (v.l, v.m) == (5740, 3362) and v.agree


def test_closed_forms_up_to_sixty():
    ls, ms = ln_mn_sequences(60)
    for n in range(61):
        assert closed_form_l(n) == ls[n] and closed_form_m(n) == ms[n]
    assert ls[60] > 2**63  # arbitrary precision needed


def test_counts_in_w():
    for n in range(1, 9):
        word = w_word(n)
        ls, ms = ln_mn_sequences(n)
        assert len(word) == ls[n] and word.count(2) == ms[n]


def test_frequency_examples():
    assert frequency_check(5).ratio == Fraction(40, 69)
    rep = frequency_check(10)
    assert rep.ratio == Fraction(3362, 5740)
    assert rep.within(Fraction(1, 1000)) and rep.distance < 1e-3
    assert not rep.within(Fraction(1, 10**6))


def test_quadint_arithmetic_and_sign():
    x = QuadIntZ2(3, -2)  # 3 - 2 sqrt 2 > 0
    assert x.sign() == 1 and x.norm() == 1
    assert (x * x.conjugate()) == QuadIntZ2(1)
    assert QuadIntZ2(-3, 2).sign() == -1
    assert QuadIntZ2(0).sign() == 0
    assert QuadIntZ2(1, 1) ** 3 == QuadIntZ2(7, 5)


@settings(max_examples=300)
@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_quadint_sign_matches_float_when_clear(a, b):
    value = a + b * 2**0.5
    if abs(value) > 1e-6:
        assert QuadIntZ2(a, b).sign() == (1 if value > 0 else -1)


def test_distance_below_is_exact():
    # 2 - sqrt 2 = 0.5857864376...
    assert distance_below(Fraction(5858, 10000), Fraction(1, 10**4))
    assert not distance_below(Fraction(5858, 10000), Fraction(1, 10**5))


# -- W and Omega ----------------------------------------------------------------------------------


def test_w_examples():
    assert w_word(0) == []
    assert w_word(2) == [1, 2, 2, 1]
    assert w_word(3) == [1, 2, 2, 1, 2, 1, 2, 1, 2, 2, 1]


def test_omega_examples():
    assert omega_word(0) == []
    twoT = T.scale(F3(2))
    assert omega_word(2) == [T, twoT, twoT, T]
    assert omega_word(3) == [T, twoT, twoT, T, twoT, T**3, twoT, T, twoT, twoT, T]


def test_words_are_nested_and_coefficients_collapse():
    for n in range(1, 9):
        assert w_word(n + 1)[: len(w_word(n))] == w_word(n)
        om = omega_word(n)
        assert omega_word(n + 1)[: len(om)] == om
        assert [int(a.leading_coeff()) for a in om] == w_word(n)


# -- the quartic -----------------------------------------------------------------------------------


def test_quartic_initial_residual():
    start = LaurentSeries.from_terms(F3, {-1: 1}, -40)
    res = evaluate_polynomial(quartic_coeffs(), start)
    assert res.agrees_with(LaurentSeries.from_terms(F3, {-2: 1, -4: 1}, -40))


def test_quartic_root_prefix():
    root = quartic_root(3**5)
    assert root.prec <= -(3**5)
    assert evaluate_polynomial(quartic_coeffs(), root).is_zero()
    pipe = quartic_expand(6)
    twoT = T.scale(F3(2))
    assert pipe.cf.pqs[:7] == (Poly.zero(F3), T, twoT, twoT, T, twoT, T**3)


def test_quartic_pipeline_168():
    pipe = quartic_expand(168)
    assert len(pipe.cf) >= 169 and pipe.cf.certified >= 169
    assert pipe.matches_omega and pipe.matches_w
    assert [int(u) for u in leading_coeffs(pipe.cf)][:168] == w_prefix(168)
    est = approx_exponent_estimate(exponent_degrees(pipe.cf))
    assert abs(float(est) - 2) <= 0.05


# -- non-automaticity evidence ---------------------------------------------------------------------


def test_w_evidence_against():
    n = required_prefix(2, 10, 64)
    ev = nonautomatic_evidence(w_prefix(n), [8, 9, 10])
    assert ev.closed == [False, False, False]
    assert ev.longest_increasing_run() >= 4
    assert "not a proof" in ev.verdict


def test_theta2_evidence_for():
    n = required_prefix(2, 10, 64)
    u = [int(x) for x in u_recursion_generate(1, [F3(1)], F3(2), F3(2), F3(1), F3(1), 3, n)]
    ev = nonautomatic_evidence(u, [8, 9, 10])
    assert all(ev.closed) and "not a proof" in ev.verdict


def test_periodic_input_closes_early():
    assert kernel_enumerate([1, 2, 2] * 200, 2, 2).closed


def test_counterexample_report_shape():
    seq = w_sequence(required_prefix(2, 8, 64))
    rep = counterexample_report(10, nonautomatic_evidence(seq, [8]))
    assert rep["ln"][10] == 5740 and rep["mn"][10] == 3362
    assert rep["ratio_n"] == {"n": 10, "m_n": 3362, "l_n": 5740, "value": 3362 / 5740}
    assert rep["dist_to_limit"] < 1e-3
    assert rep["kernel_growth"][0]["closed"] is False
