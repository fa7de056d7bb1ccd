from __future__ import annotations

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from hypercf.algebra import FieldCtx, LaurentSeries, Poly
from hypercf.automata import paperfold, required_prefix
from hypercf.estimators import ContinuedFractionExpander, KernelAutomaton
from hypercf.hyperquad import FamilyParams, family_spec
from hypercf.substitution import w_prefix
from hypercf.validation import check_indices, check_power_of, is_prime

F3 = FieldCtx(3)
N8 = required_prefix(2, 8, 64)


def test_kernel_automaton_on_paperfolding():
    v = list(paperfold(N8).terms)
    est = KernelAutomaton(depth=8).fit(v)
    assert est.closed_ and est.n_classes_ == 6
    longer = list(paperfold(20_000).terms)
    idx = np.arange(1, 20_001)
    assert est.score(idx, longer) == 1.0
    msd = KernelAutomaton(depth=8, digit_order="msd").fit(np.array(v))
    assert list(msd.predict(idx[:500])) == longer[:500]


def test_kernel_automaton_open_kernel():
    est = KernelAutomaton(depth=8, max_classes=400).fit(w_prefix(N8))
    assert not est.closed_ and est.dfao_ is None
    with pytest.raises(ValueError):
        est.predict([1, 2, 3])


def test_kernel_automaton_contract():
    est = KernelAutomaton(depth=6, skip=16)
    assert clone(est).get_params() == est.get_params()
    with pytest.raises(NotFittedError):
        est.predict([1])
    with pytest.raises(ValueError):
        KernelAutomaton(digit_order="middle").fit([1] * N8)
    fitted = KernelAutomaton(depth=4, skip=8).fit([1, 2] * 1000)
    with pytest.raises(ValueError):
        fitted.score([1, 2], [1])
    with pytest.raises(ValueError):
        fitted.predict([0])


def test_expander_outputs():
    T = Poly.T(F3)
    spec = family_spec(F3, 3, (T,), FamilyParams("F3", eps1=F3(2), eps2=F3(2)))
    series = LaurentSeries.from_terms(F3, {1: 1, -1: 1})
    X = [spec, series]
    cfs = ContinuedFractionExpander(n_pq=9).fit(X).transform(X)
    assert cfs[1].pqs == (T, T)
    u = ContinuedFractionExpander(n_pq=9, output="u").fit_transform(X)
    assert u[0] == ["1", "2", "2", "2", "1", "1", "2", "2", "1"]
    degrees = ContinuedFractionExpander(n_pq=5, output="degrees").fit(X).transform([spec])
    assert degrees == [[1, 1, 1, 3, 1]]
    rep = ContinuedFractionExpander(n_pq=2, output="report").fit().transform([series])
    assert rep[0]["pqs"] == ["T", "T"]


def test_expander_rejections():
    with pytest.raises(ValueError):
        ContinuedFractionExpander(output="png").fit()
    with pytest.raises(ValueError):
        ContinuedFractionExpander(n_pq=0).fit()
    with pytest.raises(TypeError):
        ContinuedFractionExpander().fit().transform(["T"])
    with pytest.raises(NotFittedError):
        ContinuedFractionExpander().transform([])


def test_validation_helpers():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert check_power_of(27, 3) == 27
    with pytest.raises(ValueError):
        check_power_of(6, 3)
    with pytest.raises(ValueError):
        check_indices([1, -2])
    with pytest.raises(TypeError):
        check_indices([1.5])
