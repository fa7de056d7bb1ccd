"""Univariate polynomials in T over F_q, stored sparsely.

Partial quotients of hyperquadratic continued fractions are Frobenius images
of a few short polynomials (``a^r`` with ``r`` up to ``p^2``), so their degrees
grow geometrically while the number of terms stays tiny.  A dense coefficient
list cannot hold ``T^(10^17)``; a ``{exponent: code}`` map can.
"""

from __future__ import annotations

import heapq
from collections.abc import Iterable

from ..validation import check_int, power_exponent
from .field import FieldCtx, FieldElement, FieldMismatchError

#: Degree of the zero polynomial.
DEG_ZERO = float("-inf")

_DENSE_LIMIT = 10**6


class InexactDivisionError(ArithmeticError):
    """An exact division left a nonzero remainder."""


class Poly:
    """Immutable polynomial; ``terms`` maps exponent -> nonzero field code."""

    __slots__ = ("ctx", "terms", "_deg")

    def __init__(self, ctx: FieldCtx, terms: dict[int, int] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                if e < 0:
                    raise ValueError(f"negative exponent {e} in a polynomial")
                if c:
                    clean[e] = c
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_deg", max(clean) if clean else DEG_ZERO)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ----------------------------------------------------------

    @classmethod
    def _raw(cls, ctx: FieldCtx, terms: dict[int, int]) -> Poly:
        # terms already clean
        obj = object.__new__(cls)
        object.__setattr__(obj, "ctx", ctx)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "_deg", max(terms) if terms else DEG_ZERO)
        return obj

    @classmethod
    def zero(cls, ctx: FieldCtx) -> Poly:
        return cls._raw(ctx, {})

    @classmethod
    def one(cls, ctx: FieldCtx) -> Poly:
        return cls._raw(ctx, {0: 1})

    @classmethod
    def monomial(cls, ctx: FieldCtx, exponent: int, coeff=1) -> Poly:
        c = ctx.element(coeff).value
        return cls(ctx, {exponent: c})

    @classmethod
    def T(cls, ctx: FieldCtx) -> Poly:
        return cls._raw(ctx, {1: 1})

    @classmethod
    def constant(cls, ctx: FieldCtx, c) -> Poly:
        return cls(ctx, {0: ctx.element(c).value})

    @classmethod
    def from_coeffs(cls, ctx: FieldCtx, coeffs: Iterable) -> Poly:
        """Ascending coefficients (ints, vectors or FieldElements)."""
        return cls(ctx, {i: ctx.element(c).value for i, c in enumerate(coeffs)})

    # -- inspection ------------------------------------------------------------

    @property
    def degree(self):
        """Degree as an int, or :data:`DEG_ZERO` for the zero polynomial."""
        return self._deg

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or self._deg == 0

    @property
    def lc_code(self) -> int:
        return self.terms[self._deg] if self.terms else 0

    def leading_coeff(self) -> FieldElement:
        return FieldElement(self.ctx, self.lc_code)

    def coeff(self, e: int) -> FieldElement:
        return FieldElement(self.ctx, self.terms.get(e, 0))

    @property
    def coeffs(self) -> list[FieldElement]:
        """Dense ascending coefficient list (refused for enormous degrees)."""
        if not self.terms:
            return []
        if self._deg > _DENSE_LIMIT:
            raise OverflowError(f"degree {self._deg} too large for a dense coefficient list")
        return [FieldElement(self.ctx, self.terms.get(i, 0)) for i in range(self._deg + 1)]

    def nterms(self) -> int:
        return len(self.terms)

    def lowest_exponent(self):
        return min(self.terms) if self.terms else DEG_ZERO

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other: Poly):
        if self.ctx != other.ctx:
            raise FieldMismatchError(f"{self.ctx!r} vs {other.ctx!r}")

    def _lift(self, other) -> Poly:
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, FieldElement)):
            return Poly.constant(self.ctx, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = ctx.add(out.get(e, 0), c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(ctx, out)

    __radd__ = __add__

    def __neg__(self):
        ctx = self.ctx
        return Poly._raw(ctx, {e: ctx.neg(c) for e, c in self.terms.items()})

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
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly._raw(ctx, {})
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, int] = {}
        if ctx.s == 1:
            p = ctx.p
            for e2, c2 in b.items():
                for e1, c1 in a.items():
                    e = e1 + e2
                    out[e] = (out.get(e, 0) + c1 * c2) % p
        else:
            for e2, c2 in b.items():
                for e1, c1 in a.items():
                    e = e1 + e2
                    out[e] = ctx.add(out.get(e, 0), ctx.mul(c1, c2))
        return Poly._raw(ctx, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> Poly:
        code = self.ctx.element(c).value
        if code == 0:
            return Poly._raw(self.ctx, {})
        mul = self.ctx.mul
        return Poly._raw(self.ctx, {e: mul(v, code) for e, v in self.terms.items()})

    def shift(self, k: int) -> Poly:
        """Multiply by T^k (k may be negative when the division is exact)."""
        if k < 0 and self.terms and min(self.terms) + k < 0:
            raise InexactDivisionError(f"T^{-k} does not divide the polynomial")
        return Poly._raw(self.ctx, {e + k: c for e, c in self.terms.items()})

    def frobenius(self, t: int = 1) -> Poly:
        """self ** (p**t): coefficientwise Frobenius with exponents scaled."""
        r = self.ctx.p**t
        fr = self.ctx.frobenius
        return Poly._raw(self.ctx, {e * r: fr(c, r) for e, c in self.terms.items()})

    def __pow__(self, e: int):
        return poly_pow(self, e)

    def __divmod__(self, other):
        return poly_divmod(self, other)

    def __floordiv__(self, other):
        return poly_divmod(self, other)[0]

    def __mod__(self, other):
        return poly_divmod(self, other)[1]

    def exact_div(self, other) -> Poly:
        other = self._lift(other)
        q, r = poly_divmod(self, other)
        if not r.is_zero():
            raise InexactDivisionError("division left a nonzero remainder")
        return q

    def monic(self) -> Poly:
        if not self.terms:
            return self
        return self.scale(self.ctx.inv(self.lc_code))

    def __call__(self, x):
        """Evaluate at a field element or substitute a polynomial (Horner)."""
        ctx = self.ctx
        if isinstance(x, FieldElement):
            acc = ctx.zero
            for e, c in self.terms.items():
                acc = acc + FieldElement(ctx, c) * x**e
            return acc
        if isinstance(x, Poly):
            acc = Poly.zero(ctx)
            prev = None
            for e in sorted(self.terms, reverse=True):
                if prev is not None:
                    acc = acc * poly_pow(x, prev - e)
                acc = acc + Poly._raw(ctx, {0: self.terms[e]})
                prev = e
            if prev:
                acc = acc * poly_pow(x, prev)
            return acc
        raise TypeError(f"cannot evaluate a polynomial at {type(x).__name__}")

    # -- comparison / hashing ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, FieldElement)) and not isinstance(other, bool):
            try:
                return self == Poly.constant(self.ctx, other)
            except FieldMismatchError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.s, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        from .grammar import format_poly

        return f"Poly({format_poly(self)!r}, p={self.ctx.p})"

    def __str__(self):
        from .grammar import format_poly

        return format_poly(self)


def poly_divmod(num: Poly, den: Poly, max_steps: int | None = None) -> tuple[Poly, Poly]:
    """Euclidean division; works term by term so sparse quotients stay cheap.

    ``max_steps`` bounds the number of quotient terms (a dense quotient of an
    astronomically large degree would otherwise never finish).
    """
    if not isinstance(den, Poly):
        den = Poly.constant(num.ctx, den)
    num._check(den)
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    ctx = num.ctx
    dd = den.degree
    if num.degree < dd:
        return Poly._raw(ctx, {}), num
    lc_inv = ctx.inv(den.lc_code)
    dterms = [(e - dd, c) for e, c in den.terms.items() if e != dd]
    if not dterms:
        # monomial divisor: split the terms
        q, r = {}, {}
        for e, c in num.terms.items():
            if e >= dd:
                q[e - dd] = ctx.mul(c, lc_inv)
            else:
                r[e] = c
        return Poly._raw(ctx, q), Poly._raw(ctx, r)
    rem = dict(num.terms)
    quot: dict[int, int] = {}
    steps = 0

    heap = [-e for e in rem]
    heapq.heapify(heap)
    while heap:
        e = -heapq.heappop(heap)
        c = rem.get(e)
        if not c:
            continue
        if e < dd:
            # all remaining exponents are smaller too
            heapq.heappush(heap, -e)
            break
        k = e - dd
        qc = ctx.mul(c, lc_inv)
        quot[k] = qc
        del rem[e]
        for de, dc in dterms:
            ee = de + e
            v = ctx.sub(rem.get(ee, 0), ctx.mul(qc, dc))
            if v:
                if ee not in rem:
                    heapq.heappush(heap, -ee)
                rem[ee] = v
            else:
                rem.pop(ee, None)
        steps += 1
        if max_steps is not None and steps > max_steps:
            raise OverflowError(f"quotient exceeds {max_steps} terms")
    return Poly._raw(ctx, quot), Poly._raw(ctx, rem)


def poly_pow(base: Poly, e: int) -> Poly:
    """Exact power.  Exponents that are powers of p go through Frobenius;
    others are split into base-p digits so each digit costs a short product."""
    e = check_int(e, "exponent", minimum=0)
    ctx = base.ctx
    if e == 0:
        return Poly.one(ctx)
    t = power_exponent(e, ctx.p)
    if t is not None:
        return base.frobenius(t)
    result = None
    layer = base
    while e:
        e, digit = divmod(e, ctx.p)
        if digit:
            piece = layer
            for _ in range(digit - 1):
                piece = piece * layer
            result = piece if result is None else result * piece
        if e:
            layer = layer.frobenius(1)
    return result


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1]
    return a.monic()
