"""Truncated Laurent series in 1/T over F_q.

A series stores its coefficients densely from the top exponent downwards.
``prec`` is an exclusive lower bound on the known range: coefficients at
exponents ``> prec`` are known, those at ``<= prec`` are unknown (not zero).
With this reading the Frobenius image of a series known above ``prec`` is
known above ``r * prec``.  ``prec is None`` marks an exact, finite Laurent
polynomial.  Every operation propagates the weakest precision it can justify.
"""

from __future__ import annotations

from collections.abc import Mapping

import numpy as np

from ..validation import power_exponent
from .field import FieldCtx, FieldElement, FieldMismatchError
from .poly import DEG_ZERO, Poly


class PrecisionError(ArithmeticError):
    """The known part of a series does not determine the requested quantity."""


def _weakest_prec(*precs):
    """Precision of a sum: the highest (coarsest) bound among inexact operands."""
    known = [p for p in precs if p is not None]
    return max(known) if known else None


class LaurentSeries:
    __slots__ = ("ctx", "top", "coeffs", "prec")

    def __init__(self, ctx: FieldCtx, top: int, coeffs, prec: int | None):
        coeffs = list(coeffs)
        i = 0
        while i < len(coeffs) and coeffs[i] == 0:
            i += 1
        top -= i
        coeffs = coeffs[i:]
        if prec is None:
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
            if not coeffs:
                top = 0
        else:
            if not coeffs or top <= prec:
                coeffs, top = [], prec
            else:
                n = top - prec
                if len(coeffs) >= n:
                    coeffs = coeffs[:n]
                else:
                    coeffs = coeffs + [0] * (n - len(coeffs))
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    # -- constructors ------------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx, prec: int | None = None) -> LaurentSeries:
        return cls(ctx, 0 if prec is None else prec, [], prec)

    @classmethod
    def one(cls, ctx: FieldCtx) -> LaurentSeries:
        return cls(ctx, 0, [1], None)

    @classmethod
    def monomial(cls, ctx: FieldCtx, exponent: int, coeff=1, prec: int | None = None) -> LaurentSeries:
        return cls(ctx, exponent, [ctx.element(coeff).value], prec)

    @classmethod
    def from_terms(cls, ctx: FieldCtx, terms: Mapping[int, object], prec: int | None = None) -> LaurentSeries:
        """Series from ``{exponent: coefficient}``; missing exponents are zero."""
        codes = {e: ctx.element(c).value for e, c in terms.items()}
        codes = {e: c for e, c in codes.items() if c and (prec is None or e > prec)}
        if not codes:
            return cls.zero(ctx, prec)
        hi, lo = max(codes), min(codes)
        if prec is not None:
            lo = prec + 1
        return cls(ctx, hi, [codes.get(e, 0) for e in range(hi, lo - 1, -1)], prec)

    @classmethod
    def from_poly(cls, poly: Poly, prec: int | None = None) -> LaurentSeries:
        return cls.from_terms(poly.ctx, {e: FieldElement(poly.ctx, c) for e, c in poly.terms.items()}, prec)

    @classmethod
    def from_rational(cls, num: Poly, den: Poly, prec: int) -> LaurentSeries:
        """Expansion of num/den known down to (and excluding) exponent ``prec``."""
        if den.is_zero():
            raise ZeroDivisionError("rational with zero denominator")
        if num.is_zero():
            return cls.zero(num.ctx, prec)
        rel = num.degree - den.degree - prec
        if rel <= 0:
            return cls.zero(num.ctx, prec)
        n = cls.from_poly(num)
        d = cls.from_poly(den)
        return n.truncate(n.top - rel) * d.inverse(rel_prec=rel)

    # -- inspection ----------------------------------------------------------------

    def is_zero(self) -> bool:
        """True when no nonzero coefficient is known (exact zero or zero to precision)."""
        return not self.coeffs

    def is_exact(self) -> bool:
        return self.prec is None

    @property
    def top_exponent(self) -> int:
        return self.top

    @property
    def rel_prec(self) -> int | None:
        return None if self.prec is None else self.top - self.prec

    def bottom(self) -> int:
        """Lowest exponent represented in ``coeffs``."""
        return self.top - len(self.coeffs) + 1

    def coefficient(self, e: int) -> FieldElement:
        if self.prec is not None and e <= self.prec:
            raise PrecisionError(f"coefficient of T^{e} is below the precision bound {self.prec}")
        i = self.top - e
        c = self.coeffs[i] if 0 <= i < len(self.coeffs) else 0
        return FieldElement(self.ctx, c)

    def terms(self) -> dict[int, FieldElement]:
        return {self.top - i: FieldElement(self.ctx, c) for i, c in enumerate(self.coeffs) if c}

    def window(self, hi: int, lo: int) -> list[int]:
        """Codes for exponents hi, hi-1, ..., lo (zero outside the stored range)."""
        if hi < lo:
            return []
        t, cs = self.top, self.coeffs
        i0, i1 = t - hi, t - lo + 1  # index range [i0, i1)
        a, b = max(i0, 0), min(i1, len(cs))
        if a >= b:
            return [0] * (i1 - i0)
        return [0] * (a - i0) + list(cs[a:b]) + [0] * (i1 - b)

    # -- precision handling -------------------------------------------------------------

    def truncate(self, prec: int) -> LaurentSeries:
        """Forget everything below ``prec`` (never raises precision)."""
        if self.prec is not None and prec < self.prec:
            prec = self.prec
        if not self.coeffs:
            return LaurentSeries.zero(self.ctx, prec)
        return LaurentSeries(self.ctx, self.top, self.coeffs[: max(0, self.top - prec)], prec)

    def known_part(self) -> LaurentSeries:
        """The known coefficients as an exact Laurent polynomial."""
        return LaurentSeries(self.ctx, self.top, self.coeffs, None)

    def with_prec(self, prec: int | None) -> LaurentSeries:
        return LaurentSeries(self.ctx, self.top, self.coeffs, prec)

    # -- arithmetic ------------------------------------------------------------------

    def _lift(self, other) -> LaurentSeries:
        if isinstance(other, LaurentSeries):
            if other.ctx != self.ctx:
                raise FieldMismatchError(f"{self.ctx!r} vs {other.ctx!r}")
            return other
        if isinstance(other, Poly):
            if other.ctx != self.ctx:
                raise FieldMismatchError(f"{self.ctx!r} vs {other.ctx!r}")
            return LaurentSeries.from_poly(other)
        if isinstance(other, (int, FieldElement)):
            return LaurentSeries(self.ctx, 0, [self.ctx.element(other).value], None)
        return NotImplemented

    def constant_like(self, c) -> LaurentSeries:
        return LaurentSeries(self.ctx, 0, [self.ctx.element(c).value], None)

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        prec = _weakest_prec(self.prec, other.prec)
        parts = [s for s in (self, other) if s.coeffs]
        if not parts:
            return LaurentSeries.zero(ctx, prec)
        hi = max(s.top for s in parts)
        lo = prec + 1 if prec is not None else min(s.bottom() for s in parts)
        if hi < lo:
            return LaurentSeries.zero(ctx, prec)
        if len(parts) == 1:
            return LaurentSeries(ctx, hi, parts[0].window(hi, lo), prec)
        a, b = parts[0].window(hi, lo), parts[1].window(hi, lo)
        if ctx.s == 1:
            out = ((np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % ctx.p).tolist()
        else:
            out = [ctx.add(x, y) for x, y in zip(a, b)]
        return LaurentSeries(ctx, hi, out, prec)

    __radd__ = __add__

    def __neg__(self):
        ctx = self.ctx
        if ctx.s == 1:
            neg = ((-np.asarray(self.coeffs, dtype=np.int64)) % ctx.p).tolist()
        else:
            neg = [ctx.neg(c) for c in self.coeffs]
        return LaurentSeries(ctx, self.top, neg, self.prec)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        a, b = self, other
        # zero factors
        for x, y in ((a, b), (b, a)):
            if not x.coeffs:
                if x.prec is None:
                    return LaurentSeries.zero(ctx, None)
                if not y.coeffs:
                    if y.prec is None:
                        return LaurentSeries.zero(ctx, None)
                    return LaurentSeries.zero(ctx, x.prec + y.prec)
                return LaurentSeries.zero(ctx, x.prec + y.top)
        top = a.top + b.top
        if a.prec is None and b.prec is None:
            return LaurentSeries(ctx, top, ctx.convolve(list(a.coeffs), list(b.coeffs)), None)
        cands = []
        if a.prec is not None:
            cands.append(a.prec + b.top)
        if b.prec is not None:
            cands.append(b.prec + a.top)
        # the unknown tail of either factor pollutes everything up to its cross term
        prec = max(cands)
        n = top - prec
        prod = ctx.convolve(list(a.coeffs[:n]), list(b.coeffs[:n]))[:n]
        return LaurentSeries(ctx, top, prod, prec)

    __rmul__ = __mul__

    def scale(self, c) -> LaurentSeries:
        code = self.ctx.element(c).value
        mul = self.ctx.mul
        if code == 0:
            return LaurentSeries.zero(self.ctx, None if self.prec is None else self.prec)
        return LaurentSeries(self.ctx, self.top, [mul(x, code) for x in self.coeffs], self.prec)

    def shift(self, k: int) -> LaurentSeries:
        """Multiply by T^k."""
        return LaurentSeries(
            self.ctx, self.top + k, self.coeffs, None if self.prec is None else self.prec + k
        )

    def inverse(self, rel_prec: int | None = None) -> LaurentSeries:
        """1/self.  Relative precision is preserved; exact inputs with more than
        one term need an explicit ``rel_prec``."""
        if not self.coeffs:
            raise ZeroDivisionError("series is indistinguishable from zero at its precision")
        ctx = self.ctx
        if self.prec is None:
            if len(self.coeffs) == 1:
                return LaurentSeries(ctx, -self.top, [ctx.inv(self.coeffs[0])], None)
            if rel_prec is None:
                raise PrecisionError("inverse of an exact multi-term series needs rel_prec")
            n = rel_prec
        else:
            n = self.top - self.prec
            if rel_prec is not None:
                n = min(n, rel_prec)
        inv = ctx.power_series_inverse(list(self.coeffs[:n]), n)
        return LaurentSeries(ctx, -self.top, inv, -self.top - n)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.prec is None and other.prec is None and len(other.coeffs) > 1:
            raise PrecisionError("exact division needs a precision; use from_rational or truncate first")
        if not self.coeffs:
            return self * other.inverse(rel_prec=1)
        return self * other.inverse(rel_prec=None if self.prec is None else max(1, self.top - self.prec))

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        t = power_exponent(e, self.ctx.p) if e else None
        if t is not None and t > 0:
            return series_pow_frobenius(self, e)
        result = LaurentSeries.one(self.ctx)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, LaurentSeries):
            return (self.ctx, self.top, self.coeffs, self.prec) == (other.ctx, other.top, other.coeffs, other.prec)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.top, self.coeffs, self.prec))

    def agrees_with(self, other: LaurentSeries, down_to: int | None = None) -> bool:
        """Equal on every exponent both series know (and >= down_to, if given)."""
        bounds = [x + 1 for x in (self.prec, other.prec) if x is not None]
        if down_to is not None:
            bounds.append(down_to)
        lo = max(bounds) if bounds else None
        if lo is None:
            return self == other
        hi = max(self.top if self.coeffs else lo, other.top if other.coeffs else lo, lo)
        return self.window(hi, lo) == other.window(hi, lo)

    # -- parts -----------------------------------------------------------------------------

    def poly_part(self) -> Poly:
        if self.prec is not None and self.prec >= 0:
            raise PrecisionError(f"integral part undetermined: coefficients at T^{self.prec} and below unknown")
        return Poly(self.ctx, {e: c for e, c in ((self.top - i, c) for i, c in enumerate(self.coeffs)) if e >= 0 and c})

    def frac_part(self) -> LaurentSeries:
        if self.top < 0:
            return self
        cut = self.top + 1
        return LaurentSeries(self.ctx, -1, self.coeffs[cut:], self.prec)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs[:8]):
            if c:
                terms.append(f"{self.ctx.format_code(c)}*T^{self.top - i}")
        body = " + ".join(terms) or "0"
        if len(self.coeffs) > 8:
            body += " + ..."
        tail = "exact" if self.prec is None else f"O(T^{self.prec})"
        return f"LaurentSeries({body}; {tail})"


def series_inverse(f: LaurentSeries, rel_prec: int | None = None) -> LaurentSeries:
    return f.inverse(rel_prec)


def series_pow_frobenius(f: LaurentSeries, r: int) -> LaurentSeries:
    """f**r for r a power of p: coefficients raised to r, exponents scaled by r."""
    ctx = f.ctx
    if power_exponent(r, ctx.p) is None:
        raise ValueError(f"r={r} is not a power of p={ctx.p}")
    if r == 1:
        return f
    prec = None if f.prec is None else f.prec * r
    if not f.coeffs:
        return LaurentSeries.zero(ctx, prec)
    spread = [0] * ((len(f.coeffs) - 1) * r + 1)
    fr = ctx.frobenius
    for i, c in enumerate(f.coeffs):
        if c:
            spread[i * r] = fr(c, r)
    return LaurentSeries(ctx, f.top * r, spread, prec)


def series_poly_part(f: LaurentSeries) -> tuple[Poly, bool]:
    """Integral part and whether it has positive degree (membership in F(q)^+)."""
    part = f.poly_part()
    return part, part.degree != DEG_ZERO and part.degree > 0


def evaluate_polynomial(coeffs: Mapping[int, Poly], x: LaurentSeries) -> LaurentSeries:
    """sum_i c_i x^i for polynomial coefficients c_i, with precision tracking.

    Powers that are multiples of a power of p reuse Frobenius images."""
    ctx = x.ctx
    total = LaurentSeries.zero(ctx, None)
    cache: dict[int, LaurentSeries] = {0: LaurentSeries.one(ctx), 1: x}

    def power(i):
        if i in cache:
            return cache[i]
        t = 0
        j = i
        while j % ctx.p == 0:
            j //= ctx.p
            t += 1
        if t:
            val = series_pow_frobenius(power(j), ctx.p**t)
        elif power_exponent(i - 1, ctx.p) is not None:
            val = power(i - 1) * x
        else:
            half = power(i // 2)
            val = half * half
            if i % 2:
                val = val * x
        cache[i] = val
        return val

    for i in sorted(coeffs):
        c = coeffs[i]
        if c.is_zero():
            continue
        total = total + LaurentSeries.from_poly(c) * power(i)
    return total


def formal_derivative(coeffs: Mapping[int, Poly]) -> dict[int, Poly]:
    out = {}
    for i, c in coeffs.items():
        if i and i % c.ctx.p:
            out[i - 1] = c.scale(i % c.ctx.p)
    return out


def hasse_derivative(coeffs: Mapping[int, Poly], k: int) -> dict[int, Poly]:
    from math import comb

    out = {}
    for i, c in coeffs.items():
        if i >= k:
            m = comb(i, k) % c.ctx.p
            if m:
                out[i - k] = c.scale(m)
    return out


def _degree_bound(coeffs: Mapping[int, Poly], top: int) -> float:
    best = DEG_ZERO
    for i, c in coeffs.items():
        if not c.is_zero():
            best = max(best, c.degree + i * top)
    return best


def hensel_root(
    coeffs: Mapping[int, Poly],
    x0: LaurentSeries,
    n_terms: int,
    max_iter: int = 64,
) -> LaurentSeries:
    """Newton iteration X <- X - f(X)/f'(X) for a polynomial with coefficients
    in F_q[T], returning the root to precision T^(-n_terms) or better.

    The result's precision is certified: writing h = f(x)/f'(x), once every
    Hasse derivative satisfies |f^[k](x)| |h|^k < |f(x)| (k >= 2) there is a
    unique root within |h| of x, so the digits above deg h are exact.
    """
    ctx = x0.ctx
    deriv = formal_derivative(coeffs)
    degree = max(i for i, c in coeffs.items() if not c.is_zero())
    x = x0.known_part()
    slack = 8
    for _ in range(max_iter):
        fx = evaluate_polynomial(coeffs, x)
        if fx.is_zero():
            return x
        dfx = evaluate_polynomial(deriv, x)
        if dfx.is_zero():
            raise ArithmeticError("derivative vanishes at the iterate; Newton step undefined")
        rel = max(1, fx.top - dfx.top + n_terms + slack)
        h = fx.truncate(fx.top - rel) / dfx.truncate(dfx.top - rel)
        h_deg = fx.top - dfx.top
        certified = True
        for k in range(2, degree + 1):
            hk = hasse_derivative(coeffs, k)
            if not hk:
                continue
            bound = _degree_bound(hk, x.top)
            if bound != DEG_ZERO and bound + k * h_deg >= fx.top:
                certified = False
                break
        if certified and h_deg < -n_terms:
            return x.truncate(h_deg)
        x = (x - h).known_part().truncate(-(n_terms + slack)).known_part()
    raise ArithmeticError(f"Newton iteration did not reach precision T^-{n_terms} in {max_iter} steps")
