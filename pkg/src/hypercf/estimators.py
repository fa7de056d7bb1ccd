"""scikit-learn style wrappers around the kernel and expansion machinery.

``KernelAutomaton`` fits a k-automaton to a symbol sequence: ``fit`` runs the
kernel enumeration and, when it closes, builds the automaton; ``predict``
evaluates it at arbitrary indices.  ``ContinuedFractionExpander`` turns Laurent
series (or hyperquadratic specs) into continued fractions.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .algebra.series import LaurentSeries
from .automata import MIN_WINDOW, as_sequence, dfao_eval, dfao_from_kernel, kernel_enumerate, to_msd
from .contfrac import cf_expand, cf_report, leading_coeffs
from .hyperquad import HyperquadraticSpec, bootstrap_expand
from .validation import check_indices, check_int, check_sequence


class KernelAutomaton(BaseEstimator):
    """Learn a deterministic finite automaton with output from a sequence prefix.

    Parameters
    ----------
    k : int
        Base of the kernel.
    depth : int
        Deepest kernel level explored.
    skip : int
        Initial terms ignored when comparing kernel members.
    max_classes : int
        Give up (and report the kernel as open) beyond this many classes.
    window : int
        Minimum overlap, in terms, for two members to be declared equal.
    digit_order : {"lsd", "msd"}
        Digit order of the fitted automaton.

    Attributes
    ----------
    report_ : KernelReport
    closed_ : bool
    n_classes_ : int
    dfao_ : Dfao or None
        ``None`` when the kernel did not close; ``predict`` then raises.
    """

    def __init__(self, k=2, depth=8, skip=64, max_classes=200, window=MIN_WINDOW, digit_order="lsd"):
        self.k = k
        self.depth = depth
        self.skip = skip
        self.max_classes = max_classes
        self.window = window
        self.digit_order = digit_order

    def fit(self, X, y=None):
        """X holds v(1), v(2), ...; y is ignored."""
        if self.digit_order not in ("lsd", "msd"):
            raise ValueError(f"digit_order must be 'lsd' or 'msd', got {self.digit_order!r}")
        terms = check_sequence(np.asarray(X).ravel().tolist() if isinstance(X, np.ndarray) else X, name="X")
        v = as_sequence(terms)
        self.report_ = kernel_enumerate(
            v,
            k=check_int(self.k, "k", minimum=2),
            depth=check_int(self.depth, "depth", minimum=0),
            skip=check_int(self.skip, "skip", minimum=0),
            max_classes=check_int(self.max_classes, "max_classes", minimum=1),
            window=check_int(self.window, "window", minimum=1),
        )
        self.closed_ = self.report_.closed
        self.n_classes_ = self.report_.class_count
        self.alphabet_ = v.alphabet
        self.n_terms_ = len(v)
        self.dfao_ = None
        if self.closed_:
            d = dfao_from_kernel(self.report_, v, window=self.window)
            self.dfao_ = to_msd(d) if self.digit_order == "msd" else d
        return self

    def predict(self, X):
        """Symbols at the 1-based indices in X."""
        check_is_fitted(self, "report_")
        if self.dfao_ is None:
            raise ValueError("the kernel did not close, so there is no automaton to evaluate")
        idx = check_indices(np.asarray(X).ravel().tolist() if isinstance(X, np.ndarray) else X, name="X")
        return np.array([dfao_eval(self.dfao_, n) for n in idx], dtype=object)

    def score(self, X, y):
        """Fraction of indices in X whose predicted symbol equals y."""
        pred = self.predict(X)
        y = list(np.asarray(y, dtype=object).ravel())
        if len(y) != len(pred):
            raise ValueError(f"X has {len(pred)} indices but y has {len(y)} symbols")
        return float(np.mean([a == b for a, b in zip(pred, y)])) if y else 1.0


class ContinuedFractionExpander(TransformerMixin, BaseEstimator):
    """Expand each input into its continued fraction.

    Inputs may be :class:`LaurentSeries` (expanded to their known precision)
    or :class:`HyperquadraticSpec` (bootstrapped from the equation).

    Parameters
    ----------
    n_pq : int
        Number of partial quotients requested per input.
    output : {"cf", "degrees", "u", "report"}
        What ``transform`` returns for each input: the ContinuedFraction,
        its list of degrees, its leading-coefficient sequence, or the JSON
        report dictionary.
    """

    _OUTPUTS = ("cf", "degrees", "u", "report")

    def __init__(self, n_pq=50, output="cf"):
        self.n_pq = n_pq
        self.output = output

    def fit(self, X=None, y=None):
        check_int(self.n_pq, "n_pq", minimum=1)
        if self.output not in self._OUTPUTS:
            raise ValueError(f"output must be one of {self._OUTPUTS}, got {self.output!r}")
        self.n_seen_ = 0 if X is None else len(list(X))
        return self

    def _expand(self, x):
        if isinstance(x, HyperquadraticSpec):
            return bootstrap_expand(x, self.n_pq)
        if isinstance(x, LaurentSeries):
            return cf_expand(x, self.n_pq)
        raise TypeError(f"cannot expand {type(x).__name__}; pass a LaurentSeries or HyperquadraticSpec")

    def transform(self, X):
        check_is_fitted(self, "n_seen_")
        out = []
        for x in X:
            cf = self._expand(x)
            if self.output == "cf":
                out.append(cf)
            elif self.output == "degrees":
                out.append(cf.degrees)
            elif self.output == "u":
                out.append([str(u) for u in leading_coeffs(cf)])
            else:
                out.append(cf_report(cf))
        return out
