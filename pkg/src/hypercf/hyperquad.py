"""Hyperquadratic continued fractions.

An element ``alpha = [a_1, ..., a_l, alpha_{l+1}]`` with ``alpha^r = P alpha_{l+1} + Q``
is pinned down by ``(r, P, Q, a_1..a_l)``.  Two independent routes produce its
partial quotients:

* ``bootstrap_expand`` runs the functional equation.  The expansion of
  ``alpha^r`` is ``[a_1^r, a_2^r, ...]`` (Frobenius is a field automorphism that
  respects degrees), and ``alpha_{l+1} = (alpha^r - Q)/P`` is a Moebius image
  of it, so a homographic continued-fraction transducer turns every known
  quotient into new ones.  ``method="series"`` instead iterates the same
  equation on truncated Laurent series and calls :func:`cf_expand`; it is
  dense and only suited to small instances, which is where it serves as a
  cross-check.
* ``f1_generate`` / ``f2_generate`` / ``f3_generate`` implement the closed-form
  block recurrences of the three families.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra.field import FieldCtx, FieldElement
from .algebra.grammar import format_poly, parse_poly
from .algebra.poly import DEG_ZERO, InexactDivisionError, Poly, poly_divmod
from .algebra.series import LaurentSeries, evaluate_polynomial, hensel_root
from .contfrac import ContinuedFraction, cf_eval, cf_expand, continuants, leading_coeffs
from .validation import check_int, check_power_of

FAMILIES = ("F1", "F2", "F3", "raw")


class BootstrapStall(RuntimeError):
    """The transducer needed an input quotient that was not yet known."""


@dataclass(frozen=True)
class HyperquadraticSpec:
    ctx: FieldCtx
    r: int
    P: Poly
    Q: Poly
    A: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(self.A))
        check_power_of(self.r, self.ctx.p, "r")
        if not self.A:
            raise ValueError("the prefix a_1..a_l must be nonempty")
        for i, a in enumerate(self.A, start=1):
            if a.ctx != self.ctx:
                raise ValueError(f"a_{i} lives over a different field")
            if a.is_zero() or a.degree <= 0:
                raise ValueError(f"a_{i} = {format_poly(a)} must have positive degree")
        if self.P.is_zero():
            raise ValueError("P must be nonzero")
        if not (self.Q.degree < self.P.degree < self.r):
            raise ValueError(
                f"need deg Q < deg P < r, got deg Q={self.Q.degree}, deg P={self.P.degree}, r={self.r}"
            )

    @property
    def l(self) -> int:  # noqa: E743 - conventional name for the prefix length
        return len(self.A)


@dataclass(frozen=True)
class FamilyParams:
    family: str
    eps: FieldElement | None = None
    eps1: FieldElement | None = None
    eps2: FieldElement | None = None

    def __post_init__(self):
        if self.family not in ("F1", "F2", "F3"):
            raise ValueError(f"unknown family {self.family!r}")
        needed = ("eps",) if self.family == "F1" else ("eps1", "eps2")
        for name in needed:
            v = getattr(self, name)
            if v is None or not v:
                raise ValueError(f"family {self.family} needs a nonzero {name}")

    def pq(self, ctx: FieldCtx) -> tuple[Poly, Poly]:
        T = Poly.T(ctx)
        if self.family == "F1":
            return Poly.constant(ctx, self.eps), Poly.zero(ctx)
        if self.family == "F2":
            return T.scale(self.eps1), Poly.constant(ctx, self.eps2)
        return (T * T).scale(self.eps1), T.scale(self.eps2)


def family_spec(ctx: FieldCtx, r: int, A, params: FamilyParams, relaxed: bool = False) -> HyperquadraticSpec:
    """Spec for a family member, checking the family's side conditions."""
    A = tuple(A)
    if params.family == "F2" and r <= 1:
        raise ValueError("family F2 needs r > 1")
    if params.family == "F3" and r <= 2:
        raise ValueError("family F3 needs r > 2")
    if params.family in ("F2", "F3"):
        _check_t_divides(A, params.family == "F3" and relaxed)
    P, Q = params.pq(ctx)
    return HyperquadraticSpec(ctx, r, P, Q, A)


def _check_t_divides(A, odd_only: bool = False):
    if odd_only and len(A) % 2 == 0:
        raise ValueError("the relaxed divisibility condition needs an odd prefix length")
    for i, a in enumerate(A, start=1):
        if odd_only and i % 2 == 0:
            continue
        if a.terms.get(0):
            raise ValueError(f"T does not divide a_{i} = {format_poly(a)}")


# -- the hyperquadratic equation -----------------------------------------------------------------


def eq1_coeffs(spec: HyperquadraticSpec) -> list[tuple[int, Poly]]:
    """Coefficients of y_l X^(r+1) - x_l X^r + (y_{l-1}P - y_l Q) X + (x_l Q - x_{l-1}P)."""
    c = continuants(ContinuedFraction(spec.ctx, spec.A))
    xl, xm, yl, ym = c.xs[-1], c.xs[-2], c.ys[-1], c.ys[-2]
    r = spec.r
    raw = [
        (r + 1, yl),
        (r, -xl),
        (1, ym * spec.P - yl * spec.Q),
        (0, xl * spec.Q - xm * spec.P),
    ]
    merged: dict[int, Poly] = {}
    for e, poly in raw:
        merged[e] = merged[e] + poly if e in merged else poly
    return sorted(((e, p) for e, p in merged.items() if not p.is_zero()), reverse=True)


# -- bootstrap expansion ---------------------------------------------------------------------


def _deg(p: Poly):
    return p.degree


def bootstrap_expand(
    spec: HyperquadraticSpec,
    n_pq: int,
    method: str = "homographic",
    max_terms: int = 100_000,
) -> ContinuedFraction:
    """First ``n_pq`` partial quotients of the root of the hyperquadratic equation from its prefix.

    Every quotient returned is exact: the homographic transducer only emits a
    quotient when all continuations of the input agree on it.
    """
    n_pq = check_int(n_pq, "n_pq", minimum=1)
    if spec.r <= 1:
        raise ValueError("bootstrap needs r > 1; use quadratic_expand for r = 1")
    if method == "series":
        return _bootstrap_via_series(spec, n_pq)
    if method != "homographic":
        raise ValueError(f"unknown bootstrap method {method!r}")
    ctx, r = spec.ctx, spec.r
    known: list[Poly] = list(spec.A)
    # state (A B; C D) stands for y = (A x + B)/(C x + D), x = tail of alpha^r
    A_, B_, C_, D_ = Poly.one(ctx), -spec.Q, Poly.zero(ctx), spec.P
    j = 0  # next input quotient index (0-based) of alpha^r = [a_1^r, a_2^r, ...]
    det_deg = spec.P.degree
    while len(known) < n_pq:
        if j >= 1 and not C_.is_zero():
            # lower bound on deg of the remaining tail x = a_{j+1}^r + ...
            tail_deg = r * known[j].degree if j < len(known) else r
            if C_.degree + tail_deg > _deg(D_) and det_deg < 2 * C_.degree + tail_deg:
                q, rem = poly_divmod(A_, C_, max_steps=max_terms)
                if q.is_zero() or q.degree <= 0:
                    raise AssertionError("bootstrap emitted a quotient of nonpositive degree")
                known.append(q)
                A_, B_, C_, D_ = C_, D_, rem, B_ - q * D_
                continue
        if j >= len(known):
            raise BootstrapStall(f"needed a_{j + 1} before it was produced (have {len(known)})")
        a = known[j] ** r
        A_, B_, C_, D_ = A_ * a + B_, A_, C_ * a + D_, C_
        j += 1
    return ContinuedFraction(ctx, known[:n_pq], n_pq, False, "bootstrap")


def bootstrap_series(spec: HyperquadraticSpec, prec: int, max_passes: int = 64) -> LaurentSeries:
    """The root of the hyperquadratic equation as a Laurent series known above ``prec``.

    Starts from [a_1..a_l] (known above -2 deg y_l - 1) and repeats
    alpha <- [a_1, ..., a_l, (alpha^r - Q)/P]; each pass multiplies the
    precision by roughly r.
    """
    ctx = spec.ctx
    c = continuants(ContinuedFraction(ctx, spec.A))
    xl, xm, yl, ym = (LaurentSeries.from_poly(p) for p in (c.xs[-1], c.xs[-2], c.ys[-1], c.ys[-2]))
    start = -2 * c.ys[-1].degree - 1
    alpha = LaurentSeries.from_rational(c.xs[-1], c.ys[-1], start)
    P, Q = LaurentSeries.from_poly(spec.P), LaurentSeries.from_poly(spec.Q)
    for _ in range(max_passes):
        if alpha.prec <= prec:
            return alpha.truncate(prec)
        z = (alpha ** spec.r - Q) / P
        new = (xl * z + xm) / (yl * z + ym)
        if new.prec >= alpha.prec:
            raise AssertionError(f"precision stalled at T^{alpha.prec}")
        alpha = new
    raise AssertionError("bootstrap_series exceeded its pass budget")


def _bootstrap_via_series(spec: HyperquadraticSpec, n_pq: int) -> ContinuedFraction:
    prec = -64
    while True:
        alpha = bootstrap_series(spec, prec)
        cf = cf_expand(alpha, n_pq)
        if len(cf) >= n_pq:
            return cf
        prec *= 2


# -- closed-form family generators ----------------------------------------------------------


def _prefix(ctx, A):
    A = [a if isinstance(a, Poly) else parse_poly(str(a), ctx) for a in A]
    for i, a in enumerate(A, start=1):
        if a.is_zero() or a.degree <= 0:
            raise ValueError(f"a_{i} = {format_poly(a)} must have positive degree")
    return A


def f1_generate(ctx: FieldCtx, r: int, l: int, A, eps, n_pq: int) -> ContinuedFraction:  # noqa: E741
    """a_{l+m} = eps^((-1)^m) a_m^r."""
    check_power_of(r, ctx.p, "r")
    A = _prefix(ctx, A)
    if len(A) != l:
        raise ValueError(f"prefix has {len(A)} quotients, expected l={l}")
    eps = ctx.element(eps)
    if not eps:
        raise ValueError("eps must be nonzero")
    inv = eps.inverse()
    out = list(A)
    m = 1
    while len(out) < n_pq:
        factor = eps if m % 2 == 0 else inv
        out.append((out[m - 1] ** r).scale(factor))
        m += 1
    return ContinuedFraction(ctx, out[:n_pq])


def _block_generate(ctx, r, l, A, eps1, eps2, n_pq, t_power: int, third_divides: bool):
    check_power_of(r, ctx.p, "r")
    A = _prefix(ctx, A)
    if len(A) != l:
        raise ValueError(f"prefix has {len(A)} quotients, expected l={l}")
    e1, e2 = ctx.element(eps1), ctx.element(eps2)
    if not e1 or not e2:
        raise ValueError("eps1 and eps2 must be nonzero")
    T = Poly.T(ctx)
    e1inv = e1.inverse()
    ratio = e1 / e2
    out = list(A)
    n = 0
    while len(out) < n_pq:
        a_odd = out[2 * n] ** r  # a_{2n+1}^r
        q1 = _exact_shift(a_odd, t_power, 2 * n + 1).scale(e1inv)
        out.append(q1)
        out.append(T.scale(-ratio))
        a_even = out[2 * n + 1] ** r  # a_{2n+2}^r
        if third_divides:
            a_even = _exact_shift(a_even, 1, 2 * n + 2)
        out.append(a_even.scale(-(e2 * e2) * e1inv))
        out.append(T.scale(ratio))
        n += 1
    return ContinuedFraction(ctx, out[:n_pq])


def _exact_shift(a: Poly, k: int, index: int) -> Poly:
    try:
        return a.shift(-k)
    except InexactDivisionError:
        raise InexactDivisionError(f"T^{k} does not divide a_{index}^r") from None


def f2_generate(ctx: FieldCtx, r: int, l: int, A, eps1, eps2, n_pq: int) -> ContinuedFraction:  # noqa: E741
    """Four-term blocks for (P, Q) = (eps1 T, eps2)."""
    if r <= 1:
        raise ValueError("family F2 needs r > 1")
    _check_t_divides(_prefix(ctx, A))
    return _block_generate(ctx, r, l, A, eps1, eps2, n_pq, 1, True)


def f3_generate(
    ctx: FieldCtx, r: int, l: int, A, eps1, eps2, n_pq: int, relaxed: bool = False  # noqa: E741
) -> ContinuedFraction:
    """Four-term blocks for (P, Q) = (eps1 T^2, eps2 T).

    With ``relaxed=True`` (odd l only) T need only divide the odd-indexed a_i.
    """
    if r <= 2:
        raise ValueError("family F3 needs r > 2")
    _check_t_divides(_prefix(ctx, A), odd_only=relaxed)
    return _block_generate(ctx, r, l, A, eps1, eps2, n_pq, 2, False)


def closed_form(spec: HyperquadraticSpec, params: FamilyParams, n_pq: int, relaxed: bool = False) -> ContinuedFraction:
    args = (spec.ctx, spec.r, spec.l, spec.A)
    if params.family == "F1":
        return f1_generate(*args, params.eps, n_pq)
    if params.family == "F2":
        return f2_generate(*args, params.eps1, params.eps2, n_pq)
    return f3_generate(*args, params.eps1, params.eps2, n_pq, relaxed=relaxed)


def u_params(params: FamilyParams) -> tuple[FieldElement, FieldElement, FieldElement, FieldElement]:
    """(alpha, beta, gamma, delta) of the u-recursion for an F2 or F3 member."""
    if params.family not in ("F2", "F3"):
        raise ValueError("the four-term u-recursion describes families F2 and F3")
    e1, e2 = params.eps1, params.eps2
    return e1.inverse(), -(e1 / e2), -(e2 * e2) / e1, e1 / e2


def u_recursion_generate(
    l: int, seeds, alpha, beta, gamma, delta, r: int, n: int  # noqa: E741
) -> list[FieldElement]:
    """u(l+4n+1) = alpha u(2n+1)^r, u(l+4n+2) = beta, u(l+4n+3) = gamma u(2n+2)^r, u(l+4n+4) = delta."""
    seeds = list(seeds)
    if len(seeds) != l:
        raise ValueError(f"need {l} seeds, got {len(seeds)}")
    if any(not s for s in seeds) or not all((alpha, beta, gamma, delta)):
        raise ValueError("seeds and recursion parameters must be nonzero")
    check_int(r, "r", minimum=1)
    u = list(seeds)
    k = 0
    while len(u) < n:
        u.append(alpha * u[2 * k] ** r)
        u.append(beta)
        u.append(gamma * u[2 * k + 1] ** r)
        u.append(delta)
        k += 1
    return u[:n]


def f1_u_check(u, l: int, eps, r: int) -> bool:  # noqa: E741
    """u(l+m) == eps^((-1)^m) u(m)^r for every available m."""
    eps_inv = eps.inverse()
    for m in range(1, len(u) - l + 1):
        factor = eps if m % 2 == 0 else eps_inv
        if u[l + m - 1] != factor * u[m - 1] ** r:
            return False
    return True


def smallest_period(seq) -> int | None:
    """Least pi with seq[i + pi] == seq[i] for all valid i and 2 pi <= len(seq)."""
    n = len(seq)
    for pi in range(1, n // 2 + 1):
        if all(seq[i] == seq[i + pi] for i in range(n - pi)):
            return pi
    return None


# -- quadratic case -------------------------------------------------------------------------


def quadratic_expand(
    ctx: FieldCtx, l: int, A, eps, n_pq: int, cross_check: bool = True  # noqa: E741
) -> tuple[ContinuedFraction, int | None]:
    """r = 1: a_{l+m} = eps^((-1)^m) a_m; returns the CF and its detected period.

    With ``cross_check`` the quadratic equation is solved by Newton iteration and
    its expansion compared with the recurrence, so the period is confirmed on
    the actual root and not only on the formula.
    """
    cf = f1_generate(ctx, 1, l, A, eps, n_pq)
    period = smallest_period(cf.pqs)
    if cross_check:
        eps_el = ctx.element(eps)
        spec = HyperquadraticSpec(ctx, 1, Poly.constant(ctx, eps_el), Poly.zero(ctx), cf.pqs[:l])
        root = newton_root(spec, cf.prefix(l), n_terms=_terms_for(cf))
        check = cf_expand(root, n_pq)
        if list(check.pqs) != list(cf.pqs[: len(check.pqs)]) or len(check.pqs) < n_pq:
            raise AssertionError("quadratic recurrence disagrees with the Newton root of its equation")
    return cf, period


def _terms_for(cf: ContinuedFraction) -> int:
    c = continuants(cf)
    return 2 * c.ys[-1].degree + 8


def newton_root(spec: HyperquadraticSpec, start: ContinuedFraction, n_terms: int) -> LaurentSeries:
    """Root of the hyperquadratic equation by Newton iteration started at the value of ``start``."""
    coeffs = dict(eq1_coeffs(spec))
    x0 = cf_eval(start).known_part()
    return hensel_root(coeffs, x0, n_terms)


# -- Theta_1 and Theta_2 ------------------------------------------------------------------


def theta_constructors(which: str, ctx: FieldCtx, r: int, n_pq: int, prec: int = -1000):
    """The two classical hyperquadratic examples.

    ``Theta1`` = [T, T^r, T^(r^2), ...] and ``Theta2`` = sum_n T^(-r^n).  Returns
    (series, cf); for Theta2 the CF is that of 1/Theta2, produced by the F3
    member (P, Q) = (-T^2, -T), l = 1, a_1 = T.  The series is known above
    ``prec`` (Theta1's series comes from the shortest CF prefix pinning it).
    """
    check_power_of(r, ctx.p, "r", minimum_exponent=1)
    T = Poly.T(ctx)
    if which in ("1", "Theta1", "theta1", "T1"):
        cf = f1_generate(ctx, r, 1, [T], 1, n_pq)
        series_cf = cf
        for n in range(1, len(cf) + 1):
            pre = cf.prefix(n)
            if _achievable(pre) <= prec:
                series_cf = pre
                break
        series = cf_eval(series_cf, max(prec, _achievable(series_cf)))
        return series, cf
    if which in ("2", "Theta2", "theta2", "T2"):
        terms = {}
        e = 1
        while -e > prec:
            terms[-e] = 1
            e *= r
        series = LaurentSeries.from_terms(ctx, terms, prec)
        cf = f3_generate(ctx, r, 1, [T], -1, -1, n_pq)
        return series, cf
    raise ValueError(f"unknown theta constructor {which!r}")


def _achievable(cf: ContinuedFraction) -> int:
    d = continuants(cf).ys[-1].degree
    return -1 if d == DEG_ZERO else -2 * d - 1


# -- residual check ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ResidualReport:
    valuation: int
    exact_valuation: bool
    precision: int
    margin: int
    threshold: int
    certified: bool


def root_residual(spec: HyperquadraticSpec, approx: LaurentSeries) -> ResidualReport:
    """Evaluate the hyperquadratic equation at ``approx`` (known above -N) with precision tracking.

    ``valuation`` is the top exponent of the residual when a nonzero
    coefficient is known, otherwise the precision bound (the true valuation can
    only be lower; ``exact_valuation`` is False then).  The approximation is
    certified when valuation <= -(N - margin) with
    margin = (r+1)|top(approx)| + max coefficient degree.
    """
    if approx.prec is None:
        raise ValueError("root_residual needs an approximation with finite precision")
    if approx.is_zero() or approx.prec >= 0 or approx.top <= approx.prec:
        raise ValueError("approximation carries no known coefficients")
    N = -approx.prec
    coeffs = dict(eq1_coeffs(spec))
    max_deg = max(int(c.degree) for c in coeffs.values())
    margin = (spec.r + 1) * abs(approx.top) + max_deg
    res = evaluate_polynomial(coeffs, approx)
    if res.is_zero():
        val, exact = res.prec, False
    else:
        val, exact = res.top, True
    threshold = -(N - margin)
    return ResidualReport(val, exact, N, margin, threshold, val <= threshold)


def series_for_residual(cf: ContinuedFraction, target: int, budget: int = 4000) -> LaurentSeries:
    """Series value of the shortest prefix of ``cf`` known at least down to
    ``-target`` (or the longest prefix within ``budget`` terms)."""
    best = None
    for n in range(1, len(cf) + 1):
        pre = cf.prefix(n)
        ach = _achievable(pre)
        if -ach > budget and best is not None:
            break
        best = pre
        if -ach >= target:
            break
    return cf_eval(best)


# -- spec files ----------------------------------------------------------------------------------


def spec_from_json(data: dict) -> tuple[HyperquadraticSpec, FamilyParams | None]:
    """Build a spec from the JSON spec-file layout."""
    missing = [k for k in ("p", "r", "family", "A") if k not in data]
    if missing:
        raise ValueError(f"spec file is missing {', '.join(missing)}")
    s = int(data.get("s", 1))
    modulus = data.get("modulus")
    ctx = FieldCtx(int(data["p"]), s, tuple(modulus) if modulus is not None else None)
    A = [parse_poly(a, ctx) for a in data["A"]]
    if "l" in data and int(data["l"]) != len(A):
        raise ValueError(f"l={data['l']} but A lists {len(A)} quotients")
    family = data["family"]
    r = int(data["r"])

    def coeff(name):
        if name not in data:
            raise ValueError(f"family {family} needs {name}")
        return parse_poly(str(data[name]), ctx).coeff(0) if not isinstance(data[name], list) else ctx.element(data[name])

    if family == "raw":
        if "P" not in data or "Q" not in data:
            raise ValueError("raw family needs P and Q")
        return HyperquadraticSpec(ctx, r, parse_poly(data["P"], ctx), parse_poly(data["Q"], ctx), A), None
    if family == "F1":
        params = FamilyParams("F1", eps=coeff("eps"))
    elif family in ("F2", "F3"):
        params = FamilyParams(family, eps1=coeff("eps1"), eps2=coeff("eps2"))
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    return family_spec(ctx, r, A, params, relaxed=bool(data.get("relaxed", False))), params


def spec_to_json(spec: HyperquadraticSpec, params: FamilyParams | None = None) -> dict:
    ctx = spec.ctx
    out = {"p": ctx.p, "s": ctx.s}
    if ctx.modulus is not None:
        out["modulus"] = list(ctx.modulus)
    out.update({"r": spec.r, "family": params.family if params else "raw", "l": spec.l,
                "A": [format_poly(a) for a in spec.A]})
    if params is None:
        out["P"], out["Q"] = format_poly(spec.P), format_poly(spec.Q)
    elif params.family == "F1":
        out["eps"] = ctx.format_code(params.eps.value)
    else:
        out["eps1"] = ctx.format_code(params.eps1.value)
        out["eps2"] = ctx.format_code(params.eps2.value)
    return out


def exponent_degrees(cf: ContinuedFraction) -> list[int]:
    """Degrees of the quotients of positive degree, in order (a zero or constant
    first quotient does not enter the approximation exponent)."""
    degs = [a.degree for a in cf.pqs]
    if degs and (degs[0] == DEG_ZERO or degs[0] <= 0):
        degs = degs[1:]
    return [int(d) for d in degs]


__all__ = [
    "BootstrapStall",
    "FamilyParams",
    "HyperquadraticSpec",
    "ResidualReport",
    "bootstrap_expand",
    "bootstrap_series",
    "closed_form",
    "eq1_coeffs",
    "exponent_degrees",
    "f1_generate",
    "f1_u_check",
    "f2_generate",
    "f3_generate",
    "family_spec",
    "leading_coeffs",
    "newton_root",
    "quadratic_expand",
    "root_residual",
    "series_for_residual",
    "smallest_period",
    "spec_from_json",
    "spec_to_json",
    "theta_constructors",
    "u_params",
    "u_recursion_generate",
]
