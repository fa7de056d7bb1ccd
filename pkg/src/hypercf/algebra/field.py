"""Finite fields F_q, q = p^s.

Elements are carried internally as integer codes in ``[0, q)``: the residue
itself when ``s == 1``, otherwise the base-p packing ``c_0 + c_1 p + ...`` of
the coefficient vector modulo the defining polynomial.  The public wrapper
:class:`FieldElement` is what user code sees; polynomial and series code works
on raw codes through the :class:`FieldCtx` methods for speed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..validation import check_int, check_prime

_INT64_SAFE = 2**62
_FFT_SAFE = 2**40  # bound on exact sums for float64 FFT products
_FFT_MIN = 256


def int_convolve(a, b, p: int) -> np.ndarray:
    """Product of integer coefficient arrays reduced mod p.

    Long operands go through a real FFT; rounding is exact while every
    coefficient of the true product stays below ``_FFT_SAFE``.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n = min(len(a), len(b))
    if n < _FFT_MIN or (p - 1) ** 2 * n >= _FFT_SAFE:
        return np.convolve(a, b) % p
    size = len(a) + len(b) - 1
    nfft = 1 << (size - 1).bit_length()
    prod = np.fft.irfft(np.fft.rfft(a, nfft) * np.fft.rfft(b, nfft), nfft)[:size]
    return np.rint(prod).astype(np.int64) % p


class FieldMismatchError(ValueError):
    """Operands live in different fields."""


def _poly_mod_p(a: list[int], m: list[int], p: int) -> list[int]:
    # remainder of a by monic m, ascending coefficient lists
    a = [x % p for x in a]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    a = a[:dm] if len(a) > dm else a
    while a and a[-1] == 0:
        a.pop()
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(m)//2."""
    d = len(m) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    for k in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            cand = list(low) + [1]
            if not _poly_mod_p(list(m), cand, p):
                return False
    return True


@dataclass(frozen=True)
class FieldCtx:
    """The field F_{p^s}; ``modulus`` lists the monic irreducible polynomial's
    coefficients in ascending order (omitted when ``s == 1``)."""

    p: int
    s: int = 1
    modulus: tuple[int, ...] | None = None
    _tables: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        check_prime(self.p)
        check_int(self.s, "s", minimum=1)
        if self.s == 1:
            if self.modulus is not None:
                raise ValueError("modulus is only meaningful for s > 1")
            return
        if self.modulus is None:
            raise ValueError(f"F_{self.p}^{self.s} needs a monic irreducible modulus of degree {self.s}")
        mod = tuple(int(c) % self.p for c in self.modulus)
        if len(mod) != self.s + 1 or mod[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {self.s} (ascending coefficients)")
        if self.s > 8:
            raise ValueError("extension degree s > 8 is not supported")
        if not _is_irreducible(list(mod), self.p):
            raise ValueError(f"modulus {mod} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)
        self._build_tables()

    # -- construction helpers -------------------------------------------------

    @cached_property
    def q(self) -> int:
        return self.p**self.s

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def __call__(self, value) -> FieldElement:
        return self.element(value)

    def element(self, value) -> FieldElement:
        """Build an element from an int (reduced mod p), a coefficient vector
        ``(c_{s-1}, ..., c_0)``, or another element of this field."""
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise FieldMismatchError("element belongs to a different field")
            return value
        if isinstance(value, (tuple, list)):
            if len(value) != self.s:
                raise ValueError(f"expected a vector of {self.s} coordinates")
            return FieldElement(self, self.from_vector(list(reversed(value))))
        return FieldElement(self, int(value) % self.p)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, c) for c in range(self.q)]

    def nonzero_elements(self) -> list[FieldElement]:
        return [FieldElement(self, c) for c in range(1, self.q)]

    # -- code-level arithmetic -------------------------------------------------

    def to_vector(self, a: int) -> list[int]:
        """Ascending coordinates of a code."""
        out = []
        for _ in range(self.s):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def from_vector(self, v: list[int]) -> int:
        code = 0
        for c in reversed(v):
            code = code * self.p + (c % self.p)
        return code

    def _build_tables(self):
        p, s, q = self.p, self.s, self.q
        if q > 1 << 16:
            return
        vec = [self.to_vector(c) for c in range(q)]

        def slow_mul(a, b):
            prod = [0] * (2 * s - 1)
            for i, x in enumerate(vec[a]):
                if x:
                    for j, y in enumerate(vec[b]):
                        prod[i + j] += x * y
            return self.from_vector(_poly_mod_p(prod, list(self.modulus), p) + [0] * s)

        # search a generator of the multiplicative group
        order = q - 1
        prime_factors = [f for f in range(2, order + 1) if order % f == 0 and check_prime_quiet(f)]
        gen = None
        for g in range(2, q):
            ok = True
            for f in prime_factors:
                x, e, acc = g, order // f, 1
                while e:
                    if e & 1:
                        acc = slow_mul(acc, x)
                    x = slow_mul(x, x)
                    e >>= 1
                if acc == 1:
                    ok = False
                    break
            if ok:
                gen = g
                break
        exp = [0] * (2 * order)
        log = [0] * q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = slow_mul(x, gen)
        for i in range(order, 2 * order):
            exp[i] = exp[i - order]
        self._tables["exp"] = exp
        self._tables["log"] = log
        self._tables["vec"] = vec

    def add(self, a: int, b: int) -> int:
        if self.s == 1:
            return (a + b) % self.p
        va, vb = self._vec(a), self._vec(b)
        return self.from_vector([x + y for x, y in zip(va, vb)])

    def sub(self, a: int, b: int) -> int:
        if self.s == 1:
            return (a - b) % self.p
        va, vb = self._vec(a), self._vec(b)
        return self.from_vector([x - y for x, y in zip(va, vb)])

    def neg(self, a: int) -> int:
        if self.s == 1:
            return (-a) % self.p
        return self.from_vector([-x for x in self._vec(a)])

    def mul(self, a: int, b: int) -> int:
        if self.s == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        t = self._tables
        if "exp" in t:
            return t["exp"][t["log"][a] + t["log"][b]]
        va, vb = self.to_vector(a), self.to_vector(b)
        prod = [0] * (2 * self.s - 1)
        for i, x in enumerate(va):
            for j, y in enumerate(vb):
                prod[i + j] += x * y
        return self.from_vector(_poly_mod_p(prod, list(self.modulus), self.p) + [0] * self.s)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        if self.s == 1:
            return pow(a, -1, self.p)
        t = self._tables
        if "exp" in t:
            return t["exp"][(self.q - 1 - t["log"][a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("negative exponent; invert first")
        if self.s == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        t = self._tables
        if "exp" in t:
            return t["exp"][(t["log"][a] * e) % (self.q - 1)]
        acc = 1
        while e:
            if e & 1:
                acc = self.mul(acc, a)
            a = self.mul(a, a)
            e >>= 1
        return acc

    def frobenius(self, a: int, r: int) -> int:
        """a**r for r a power of p (identity on F_p)."""
        if self.s == 1:
            return a
        return self.pow(a, r % (self.q - 1) or (self.q - 1)) if a else 0

    def _vec(self, a: int) -> list[int]:
        t = self._tables
        if "vec" in t:
            return t["vec"][a]
        return self.to_vector(a)

    # -- vectorised helpers used by dense series --------------------------------

    def _numpy_ok(self, n: int) -> bool:
        return self.s == 1 and (self.p - 1) ** 2 * max(n, 1) < _INT64_SAFE

    def convolve(self, a: list[int], b: list[int]) -> list[int]:
        """Coefficient list of the product of two coefficient lists."""
        if not a or not b:
            return []
        if self._numpy_ok(min(len(a), len(b))):
            return int_convolve(a, b, self.p).tolist()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = self.add(out[i + j], self.mul(x, y))
        return out

    def power_series_inverse(self, u: list[int], n: int) -> list[int]:
        """First n coefficients of 1/u for a power series u with u[0] != 0."""
        if n <= 0:
            return []
        u0inv = self.inv(u[0])
        if self._numpy_ok(n):
            p = self.p
            ua = np.asarray(u[:n], dtype=np.int64)
            g = np.array([u0inv], dtype=np.int64)
            m = 1
            while m < n:
                m2 = min(2 * m, n)
                e = int_convolve(ua[:m2], g, p)[:m2]
                e = (-e) % p
                e[0] = (e[0] + 2) % p
                g = int_convolve(g, e, p)[:m2]
                m = m2
            return g.tolist()
        out = [u0inv]
        for k in range(1, n):
            acc = 0
            for i in range(1, min(k, len(u) - 1) + 1):
                if u[i] and out[k - i]:
                    acc = self.add(acc, self.mul(u[i], out[k - i]))
            out.append(self.mul(self.neg(acc), u0inv))
        return out

    # -- text ----------------------------------------------------------------

    def format_code(self, a: int) -> str:
        if self.s == 1:
            return str(a)
        return "(" + ",".join(str(c) for c in reversed(self.to_vector(a))) + ")"

    def __repr__(self):
        if self.s == 1:
            return f"FieldCtx(p={self.p})"
        return f"FieldCtx(p={self.p}, s={self.s}, modulus={self.modulus})"


def check_prime_quiet(n: int) -> bool:
    try:
        check_prime(n)
    except ValueError:
        return False
    return True


class FieldElement:
    """Immutable element of F_q."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise FieldMismatchError(f"{self.ctx!r} vs {other.ctx!r}")
            return other.value
        if isinstance(other, int):
            return other % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.sub(b, self.value))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.mul(self.value, b))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        return FieldElement(self.ctx, self.ctx.inv(self.value))

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.mul(self.value, self.ctx.inv(b)))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.mul(b, self.ctx.inv(self.value)))

    def __pow__(self, e: int):
        if e < 0:
            return FieldElement(self.ctx, self.ctx.pow(self.ctx.inv(self.value), -e))
        return FieldElement(self.ctx, self.ctx.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.ctx.s == 1 and self.value == other % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.s, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.ctx.format_code(self.value)} in F_{self.ctx.q})"

    def __str__(self):
        return self.ctx.format_code(self.value)


def field_arith(op: str, a: FieldElement, b=None) -> FieldElement:
    """Dispatch ``add``, ``mul``, ``inv`` or ``pow`` (b is then a nonnegative int)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow":
        e = check_int(b, "exponent", minimum=0)
        return a**e
    raise ValueError(f"unknown field operation {op!r}")
