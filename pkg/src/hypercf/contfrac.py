"""Continued fractions of Laurent series over F_q.

``cf_expand`` only emits partial quotients whose polynomial part is pinned by
the known coefficients of the current remainder, so a returned prefix is exact
for every series agreeing with the input to its precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .algebra.field import FieldCtx, FieldElement
from .algebra.grammar import PolyParseError, format_poly, parse_poly
from .algebra.poly import DEG_ZERO, Poly, poly_divmod
from .algebra.series import LaurentSeries, PrecisionError

REASON_COMPLETE = "exact: remainder is zero"
REASON_MAX = "reached requested count"
REASON_PRECISION = "precision exhausted"
REASON_ZERO_TO_PREC = "remainder vanishes to the known precision"


@dataclass(frozen=True)
class ContinuedFraction:
    ctx: FieldCtx
    pqs: tuple[Poly, ...]
    certified: int = -1
    complete: bool = False
    reason: str = REASON_MAX

    def __post_init__(self):
        pqs = tuple(self.pqs)
        object.__setattr__(self, "pqs", pqs)
        if self.certified < 0:
            object.__setattr__(self, "certified", len(pqs))
        if self.certified > len(pqs):
            raise ValueError("certified count exceeds the number of partial quotients")
        for i, a in enumerate(pqs):
            if a.ctx != self.ctx:
                raise ValueError(f"partial quotient {i + 1} lives over a different field")
            if i >= 1 and (a.is_zero() or a.degree <= 0):
                raise ValueError(f"partial quotient {i + 1} must have positive degree, got {format_poly(a)}")

    def __len__(self):
        return len(self.pqs)

    def __getitem__(self, i):
        return self.pqs[i]

    @property
    def degrees(self) -> list:
        return [a.degree for a in self.pqs]

    def prefix(self, n: int) -> ContinuedFraction:
        n = min(n, len(self.pqs))
        return ContinuedFraction(self.ctx, self.pqs[:n], min(n, self.certified), self.complete and n == len(self.pqs), self.reason)

    def __str__(self):
        return format_cf(self)


@dataclass(frozen=True)
class Continuants:
    xs: list[Poly] = field(default_factory=list)
    ys: list[Poly] = field(default_factory=list)


def cf_from_rational(num: Poly, den: Poly, max_pq: int | None = None) -> ContinuedFraction:
    """Euclid's algorithm on num/den; every quotient is exact."""
    if den.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    ctx = num.ctx
    out = []
    complete = False
    while max_pq is None or len(out) < max_pq:
        q, r = poly_divmod(num, den)
        out.append(q)
        if r.is_zero():
            complete = True
            break
        num, den = den, r
    return ContinuedFraction(ctx, out, len(out), complete, REASON_COMPLETE if complete else REASON_MAX)


def cf_expand(f: LaurentSeries, max_pq: int) -> ContinuedFraction:
    """Partial quotients of ``f`` that its known coefficients determine, up to ``max_pq``."""
    ctx = f.ctx
    if f.prec is None:
        # exact Laurent polynomial: f = num / T^k
        k = max(0, -f.bottom()) if f.coeffs else 0
        num = Poly(ctx, {e + k: c for e, c in ((f.top - i, c) for i, c in enumerate(f.coeffs)) if c})
        return cf_from_rational(num, Poly.monomial(ctx, k), max_pq)
    out: list[Poly] = []
    x = f
    reason = REASON_MAX
    while len(out) < max_pq:
        if x.is_zero():
            reason = REASON_ZERO_TO_PREC
            break
        if x.prec >= 0:
            reason = REASON_PRECISION
            break
        a = x.poly_part()
        out.append(a)
        frac = x.frac_part()
        if frac.is_zero():
            reason = REASON_ZERO_TO_PREC
            break
        if len(out) >= max_pq:
            break
        x = frac.inverse()
    return ContinuedFraction(ctx, out, len(out), False, reason)


def continuants(cf: ContinuedFraction) -> Continuants:
    ctx = cf.ctx
    one, zero = Poly.one(ctx), Poly.zero(ctx)
    xs, ys = [one], [zero]
    xm, ym = zero, one  # x_{-1}, y_{-1}
    for a in cf.pqs:
        xn = a * xs[-1] + xm
        yn = a * ys[-1] + ym
        xm, ym = xs[-1], ys[-1]
        xs.append(xn)
        ys.append(yn)
    return Continuants(xs, ys)


def achievable_precision(cf: ContinuedFraction) -> int | None:
    """Precision to which [a_1..a_n] pins every series with that expansion prefix."""
    if cf.complete:
        return None
    ys = continuants(cf).ys
    d = ys[-1].degree
    return -1 if d == DEG_ZERO else -2 * d - 1


def cf_eval(cf: ContinuedFraction, prec: int | None = None, finite: bool = False) -> LaurentSeries:
    """Series of x_n/y_n down to ``prec`` (default: the achievable bound).

    A complete expansion (or ``finite=True``) denotes the rational x_n/y_n
    itself.  Otherwise the prefix stands for every series sharing it, which
    pins coefficients only above -2 deg y_n - 1; asking for more raises
    :class:`PrecisionError` naming the achievable bound.
    """
    if not cf.pqs:
        raise ValueError("cannot evaluate an empty continued fraction")
    ach = achievable_precision(cf)
    if prec is None:
        if ach is None:
            raise ValueError("a complete expansion needs an explicit precision")
        prec = ach
    if not (cf.complete or finite):
        if prec < ach:
            raise PrecisionError(f"requested precision T^{prec} but this prefix only supports T^{ach}")
    c = continuants(cf)
    return LaurentSeries.from_rational(c.xs[-1], c.ys[-1], prec)


def determinant_ok(c: Continuants) -> bool:
    """x_n y_{n-1} - x_{n-1} y_n == (-1)^n for every n >= 1."""
    if not c.xs:
        return True
    ctx = c.xs[0].ctx
    for n in range(1, len(c.xs)):
        lhs = c.xs[n] * c.ys[n - 1] - c.xs[n - 1] * c.ys[n]
        if lhs != Poly.constant(ctx, (-1) ** n):
            return False
    return True


def leading_coeffs(cf: ContinuedFraction) -> list[FieldElement]:
    """u(n) = leading coefficient of a_n; a zero first quotient is skipped."""
    pqs = cf.pqs
    if pqs and pqs[0].is_zero():
        pqs = pqs[1:]
    return [a.leading_coeff() for a in pqs]


@dataclass(frozen=True)
class ExponentEstimate:
    value: Fraction
    window: tuple[int, int]
    argmax: int
    ratio: Fraction

    def __float__(self):
        return float(self.value)


def approx_exponent_estimate(degrees, tail: float = 0.25) -> ExponentEstimate:
    """2 + max of d_{n+1} / (d_1 + ... + d_n) over the last ``tail`` share of n.

    The early ratios are dominated by the first few quotients and say nothing
    about a limsup, so only the trailing window counts.  ``window`` holds the
    1-based range of n inspected and ``argmax`` the n attaining the maximum.
    """
    degrees = [int(d) for d in degrees]
    if len(degrees) < 4:
        raise ValueError(f"need at least 4 degrees, got {len(degrees)}")
    if any(d <= 0 for d in degrees):
        raise ValueError("degrees must be positive integers")
    if not 0 < tail <= 1:
        raise ValueError("tail must lie in (0, 1]")
    ratios = []
    total = 0
    for n in range(1, len(degrees)):
        total += degrees[n - 1]
        ratios.append(Fraction(degrees[n], total))
    width = max(1, ceil(len(ratios) * tail))
    start = len(ratios) - width
    best = max(range(start, len(ratios)), key=lambda i: ratios[i])
    return ExponentEstimate(2 + ratios[best], (start + 1, len(ratios)), best + 1, ratios[best])


# -- text and JSON forms -----------------------------------------------------------------


def format_cf(cf: ContinuedFraction) -> str:
    return "[" + ", ".join(format_poly(a) for a in cf.pqs) + "]"


def split_top_level(text: str) -> list[str]:
    """Split on commas outside parentheses (extension-field coefficients use them)."""
    chunks, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            chunks.append(text[start:i])
            start = i + 1
    chunks.append(text[start:])
    return chunks


def parse_cf(text: str, ctx: FieldCtx, column_offset: int = 0) -> ContinuedFraction:
    """Parse ``[a_1, a_2, ...]``; errors carry 1-based columns."""
    stripped = text.rstrip("\n")
    lead = len(stripped) - len(stripped.lstrip())
    body = stripped.strip()
    if not body.startswith("["):
        raise PolyParseError("expected '['", lead + 1 + column_offset, text)
    if not body.endswith("]"):
        raise PolyParseError("expected ']'", lead + len(body) + 1 + column_offset, text)
    inner = body[1:-1]
    base = lead + 1
    if not inner.strip():
        return ContinuedFraction(ctx, ())
    pqs = []
    pos = 0
    for chunk in split_top_level(inner):
        if not chunk.strip():
            raise PolyParseError("empty partial quotient", base + pos + 1 + column_offset, text)
        pqs.append(parse_poly(chunk, ctx, column_offset + base + pos))
        pos += len(chunk) + 1
    try:
        return ContinuedFraction(ctx, pqs)
    except ValueError as exc:
        raise PolyParseError(str(exc), base + 1 + column_offset, text) from None


def cf_report(cf: ContinuedFraction) -> dict:
    return {
        "pqs": [format_poly(a) for a in cf.pqs],
        "certified": cf.certified,
        "degrees": [a.degree if a.degree != DEG_ZERO else None for a in cf.pqs],
        "u": [str(u) for u in leading_coeffs(cf)],
    }
