"""Substitutions, their incidence matrices, and the quartic counterexample.

The word W over {1, 2} (W_n = W_{n-1} 2 W_{n-2} 2 W_{n-1}) is the image under
a -> 1, b -> 2, c -> 2 of the fixed point of a -> abca, b -> ca, c -> c.  Its
polynomial twin Omega lists the partial quotients of the root of
X^4 + X^2 - T X + 1 over F_3 with zero integral part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra.field import FieldCtx
from .algebra.poly import Poly, poly_pow
from .algebra.series import LaurentSeries, hensel_root
from .automata import KernelReport, SymbolSequence, as_sequence, kernel_enumerate
from .contfrac import ContinuedFraction, cf_expand, leading_coeffs
from .validation import check_int

# -- morphisms ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class Morphism:
    alphabet: tuple
    images: dict
    output_map: dict = field(default_factory=dict)

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet letters must be distinct")
        images = {}
        for a in alphabet:
            if a not in self.images:
                raise ValueError(f"no image for letter {a!r}")
            img = tuple(self.images[a])
            if not img:
                raise ValueError(f"image of {a!r} is empty")
            for b in img:
                if b not in alphabet:
                    raise ValueError(f"image of {a!r} uses {b!r}, which is not in the alphabet")
            images[a] = img
        extra = set(self.images) - set(alphabet)
        if extra:
            raise ValueError(f"images given for letters outside the alphabet: {sorted(extra)}")
        out = dict(self.output_map) if self.output_map else {a: a for a in alphabet}
        missing = [a for a in alphabet if a not in out]
        if missing:
            raise ValueError(f"output map misses letters {missing}")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "output_map", out)

    def apply(self, word) -> list:
        out = []
        for a in word:
            out.extend(self.images[a])
        return out

    def iterate(self, a, n: int) -> list:
        word = [a]
        for _ in range(n):
            word = self.apply(word)
        return word

    def output(self, word) -> list:
        return [self.output_map[a] for a in word]

    def is_prolongable(self, a) -> bool:
        img = self.images.get(a)
        return bool(img) and img[0] == a and len(img) >= 2


def quartic_morphism() -> Morphism:
    """a -> abca, b -> ca, c -> c with output a -> 1, b, c -> 2."""
    return Morphism(("a", "b", "c"), {"a": "abca", "b": "ca", "c": "c"}, {"a": 1, "b": 2, "c": 2})


def fixed_point_prefix(m: Morphism, a, n_terms: int) -> list:
    """First ``n_terms`` letters of sigma^infinity(a)."""
    n_terms = check_int(n_terms, "n_terms", minimum=0)
    if not m.is_prolongable(a):
        raise ValueError(f"morphism is not prolongable on {a!r}")
    word = [a]
    while len(word) < n_terms:
        word = m.apply(word)
    return word[:n_terms]


@dataclass(frozen=True)
class IncidenceMatrix:
    letters: tuple
    entries: tuple  # entries[i][j] = occurrences of letters[i] in sigma(letters[j])

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def column_sums(self) -> list[int]:
        n = len(self.letters)
        return [sum(self.entries[i][j] for i in range(n)) for j in range(n)]

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


def incidence_matrix(m: Morphism) -> IncidenceMatrix:
    letters = m.alphabet
    entries = tuple(tuple(m.images[b].count(a) for b in letters) for a in letters)
    return IncidenceMatrix(letters, entries)


@dataclass(frozen=True)
class PerronResult:
    value: float
    vector: tuple
    iterations: int
    char_poly: tuple | None  # integer coefficients, highest degree first
    factored: str | None
    converged: bool = True


def perron_eigenvalue(M, tol: float = 1e-12, max_iter: int = 100_000, exact: bool = True) -> PerronResult:
    """Dominant eigenvalue by L1-normalised power iteration from the all-ones vector.

    The iteration runs on M + I (same eigenvectors, dominant eigenvalue shifted
    by one), which keeps it convergent for irreducible but periodic matrices.
    It stops once both the eigenvalue estimate and the normalised vector have
    settled.  For matrices of size <= 4 the exact characteristic polynomial is
    attached unless ``exact`` is False.  A defective dominant eigenvalue
    (a Jordan block) converges only like 1/k; ``converged`` is False when the
    iteration budget ran out first.
    """
    entries = M.entries if isinstance(M, IncidenceMatrix) else tuple(tuple(int(x) for x in row) for row in M)
    A = np.array(entries, dtype=float)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise ValueError("matrix must be square")
    if (A < 0).any():
        raise ValueError("matrix must be nonnegative")
    B = A + np.eye(n)
    x = np.ones(n) / n
    lam = 0.0
    it = 0
    converged = False
    for it in range(1, max_iter + 1):
        y = B @ x
        s = y.sum()
        if s == 0:
            raise ValueError("power iteration collapsed to zero (nilpotent matrix)")
        new_lam = s - 1.0  # x has unit L1 norm, so s = (lambda + 1) once converged
        new_x = y / s
        # the estimate alone can repeat by accident before the vector settles
        settled = np.abs(new_x - x).sum() <= tol
        x = new_x
        if it > 1 and settled and abs(new_lam - lam) <= tol * max(1.0, abs(new_lam)):
            lam = new_lam
            converged = True
            break
        lam = new_lam
    char_poly = factored = None
    if exact and n <= 4:
        char_poly, factored = _char_poly(entries)
    return PerronResult(float(lam), tuple(float(v) for v in x), it, char_poly, factored, converged)


def _char_poly(entries) -> tuple[tuple, str]:
    import sympy

    lam = sympy.Symbol("lambda")
    poly = sympy.Matrix(entries).charpoly(lam)
    coeffs = tuple(int(c) for c in poly.all_coeffs())
    return coeffs, str(sympy.factor(poly.as_expr()))


# -- exact arithmetic in Z[sqrt 2] ------------------------------------------------------------------


@dataclass(frozen=True)
class QuadIntZ2:
    """a + b sqrt(2) with integer a, b."""

    a: int
    b: int = 0

    def _c(self, o):
        if isinstance(o, QuadIntZ2):
            return o
        if isinstance(o, int):
            return QuadIntZ2(o, 0)
        return NotImplemented

    def __add__(self, o):
        o = self._c(o)
        return NotImplemented if o is NotImplemented else QuadIntZ2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadIntZ2(-self.a, -self.b)

    def __sub__(self, o):
        o = self._c(o)
        return NotImplemented if o is NotImplemented else QuadIntZ2(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        o = self._c(o)
        return NotImplemented if o is NotImplemented else o - self

    def __mul__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return o
        return QuadIntZ2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        e = check_int(e, "exponent", minimum=0)
        out, base = QuadIntZ2(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conjugate(self) -> QuadIntZ2:
        return QuadIntZ2(self.a, -self.b)

    def norm(self) -> int:
        return self.a * self.a - 2 * self.b * self.b

    def sign(self) -> int:
        """Sign of a + b sqrt 2, decided with integers only."""
        a, b = self.a, self.b
        if a >= 0 and b >= 0:
            return 0 if a == 0 and b == 0 else 1
        if a <= 0 and b <= 0:
            return -1
        # opposite signs: compare a^2 with 2 b^2
        if a > 0:
            return 1 if a * a > 2 * b * b else -1
        return 1 if 2 * b * b > a * a else -1

    def __float__(self):
        return self.a + self.b * 2**0.5

    def __str__(self):
        return f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}*sqrt(2)"


SILVER = QuadIntZ2(1, 1)
SILVER_CONJ = QuadIntZ2(1, -1)


@dataclass(frozen=True)
class LnMn:
    n: int
    l: int  # noqa: E741
    m: int
    l_closed: int
    m_closed: int

    @property
    def agree(self) -> bool:
        return self.l == self.l_closed and self.m == self.m_closed


def ln_mn_sequences(n: int) -> tuple[list[int], list[int]]:
    """l_k = 2 l_{k-1} + l_{k-2} + 2 (l_0 = 0, l_1 = 1); m_k likewise with m_0 = m_1 = 0."""
    n = check_int(n, "n", minimum=0)
    ls, ms = [0, 1], [0, 0]
    while len(ls) <= n:
        ls.append(2 * ls[-1] + ls[-2] + 2)
        ms.append(2 * ms[-1] + ms[-2] + 2)
    return ls[: n + 1], ms[: n + 1]


def closed_form_l(n: int) -> int:
    # 4 (l_n + 1) = (2 + sqrt2)(1 + sqrt2)^n + (2 - sqrt2)(1 - sqrt2)^n
    v = QuadIntZ2(2, 1) * SILVER**n + QuadIntZ2(2, -1) * SILVER_CONJ**n
    if v.b != 0 or v.a % 4:
        raise ArithmeticError("closed form for l_n left Z")
    return v.a // 4 - 1


def closed_form_m(n: int) -> int:
    # 2 (m_n + 1) = (1 + sqrt2)^n + (1 - sqrt2)^n
    v = SILVER**n + SILVER_CONJ**n
    if v.b != 0 or v.a % 2:
        raise ArithmeticError("closed form for m_n left Z")
    return v.a // 2 - 1


def ln_mn(n: int) -> LnMn:
    ls, ms = ln_mn_sequences(n)
    return LnMn(n, ls[n], ms[n], closed_form_l(n), closed_form_m(n))


@dataclass(frozen=True)
class FrequencyReport:
    n: int
    ratio: Fraction
    distance: float  # display only; verdicts use exact sign tests

    def within(self, eps: Fraction) -> bool:
        """|ratio - (2 - sqrt 2)| < eps, decided exactly."""
        return distance_below(self.ratio, Fraction(eps))

    def side(self) -> int:
        """Sign of ratio - (2 - sqrt 2)."""
        x, y = self.ratio.numerator, self.ratio.denominator
        return QuadIntZ2(x - 2 * y, y).sign()


def distance_below(ratio: Fraction, eps: Fraction) -> bool:
    x, y = ratio.numerator, ratio.denominator
    e, f = eps.numerator, eps.denominator
    # ratio - (2 - sqrt2) - eps < 0  and  ratio - (2 - sqrt2) + eps > 0, scaled by y f > 0
    upper = QuadIntZ2(x * f - 2 * y * f - e * y, y * f).sign() < 0
    lower = QuadIntZ2(x * f - 2 * y * f + e * y, y * f).sign() > 0
    return upper and lower


def frequency_check(n: int) -> FrequencyReport:
    n = check_int(n, "n", minimum=2)
    v = ln_mn(n)
    ratio = Fraction(v.m, v.l)
    return FrequencyReport(n, ratio, abs(float(ratio) - (2 - 2**0.5)))


# -- the twin words W and Omega --------------------------------------------------------------


def w_word(n: int) -> list[int]:
    """W_0 = (), W_1 = (1), W_n = W_{n-1} 2 W_{n-2} 2 W_{n-1}."""
    n = check_int(n, "n", minimum=0)
    prev, cur = [], [1]
    if n == 0:
        return []
    for _ in range(n - 1):
        prev, cur = cur, cur + [2] + prev + [2] + cur
    return cur


def w_prefix(n_terms: int) -> list[int]:
    """First ``n_terms`` symbols of the limit word (W_n is a prefix of W_{n+1})."""
    n = 1
    while len(w_word(n)) < n_terms:
        n += 1
    return w_word(n)[:n_terms]


def _cube_word(word):
    return [poly_pow(a, 3) for a in word]


def omega_word(n: int, ctx: FieldCtx | None = None) -> list[Poly]:
    """Omega_0 = (), Omega_1 = (T), Omega_n = Omega_{n-1}, 2T, Omega_{n-2}^(3), 2T, Omega_{n-1}."""
    n = check_int(n, "n", minimum=0)
    ctx = ctx or FieldCtx(3)
    if ctx.p != 3 or ctx.s != 1:
        raise ValueError("Omega lives over F_3")
    if n == 0:
        return []
    T = Poly.T(ctx)
    twoT = T.scale(2)
    prev, cur = [], [T]
    for _ in range(n - 1):
        prev, cur = cur, cur + [twoT] + _cube_word(prev) + [twoT] + cur
    return cur


def omega_prefix(n_terms: int) -> list[Poly]:
    n = 1
    while True:
        w = omega_word(n)
        if len(w) >= n_terms:
            return w[:n_terms]
        n += 1


# -- the quartic -------------------------------------------------------------------------------


def quartic_coeffs(ctx: FieldCtx | None = None) -> dict[int, Poly]:
    """X^4 + X^2 - T X + 1 over F_3."""
    ctx = ctx or FieldCtx(3)
    one = Poly.one(ctx)
    return {4: one, 2: one, 1: -Poly.T(ctx), 0: one}


def quartic_root(n_prec: int) -> LaurentSeries:
    """Root with zero integral part, known at least down to T^(-n_prec), by Newton
    iteration from 1/T."""
    n_prec = check_int(n_prec, "n_prec", minimum=4)
    ctx = FieldCtx(3)
    return hensel_root(quartic_coeffs(ctx), LaurentSeries.monomial(ctx, -1), n_prec)


@dataclass
class QuarticPipeline:
    cf: ContinuedFraction
    omega: list[Poly]
    w: list[int]
    precision: int
    matches_omega: bool
    matches_w: bool


def quartic_expand(n_quotients: int, start_prec: int | None = None) -> QuarticPipeline:
    """Certified expansion of the quartic root with at least ``n_quotients``
    quotients after the leading 0, compared with Omega and W."""
    n_quotients = check_int(n_quotients, "n_quotients", minimum=1)
    N = start_prec or max(64, 6 * n_quotients)
    while True:
        root = quartic_root(N)
        cf = cf_expand(root, n_quotients + 1)
        if len(cf) >= n_quotients + 1:
            break
        N *= 2
    omega = omega_prefix(n_quotients)
    w = w_prefix(n_quotients)
    u = [int(x) for x in leading_coeffs(cf)]
    ok_omega = cf.pqs[0].is_zero() and list(cf.pqs[1:]) == omega
    return QuarticPipeline(cf, omega, w, N, ok_omega, u == w)


# -- non-automaticity evidence ------------------------------------------------------------------


@dataclass
class EvidenceReport:
    depths: list[int]
    reports: list[KernelReport]
    verdict: str

    @property
    def counts(self) -> list[int]:
        return [r.class_count for r in self.reports]

    @property
    def closed(self) -> list[bool]:
        return [r.closed for r in self.reports]

    def longest_increasing_run(self) -> int:
        """Longest run of consecutive depths with strictly increasing cumulative class
        counts, read off the deepest report's growth profile."""
        growth = self.reports[-1].growth if self.reports else []
        best = run = 1 if growth else 0
        for a, b in zip(growth, growth[1:]):
            run = run + 1 if b > a else 1
            best = max(best, run)
        return best

    def to_json(self) -> list[dict]:
        return [r.to_json() for r in self.reports]


def nonautomatic_evidence(
    v, depths, k: int = 2, skip: int = 64, max_classes: int = 400
) -> EvidenceReport:
    """Kernel enumeration at each depth.  Never a proof: a finite prefix
    cannot decide automaticity either way."""
    v = as_sequence(v)
    depths = sorted(set(int(d) for d in depths))
    reports = [kernel_enumerate(v, k, d, skip, max_classes) for d in depths]
    if all(not r.closed for r in reports):
        verdict = "evidence against automaticity: the kernel never closed (not a proof)"
    elif all(r.closed for r in reports):
        verdict = "evidence of automaticity: the kernel closed at every depth (not a proof)"
    else:
        verdict = "mixed evidence: the kernel closed at some depths only (not a proof)"
    return EvidenceReport(depths, reports, verdict)


def w_sequence(n_terms: int) -> SymbolSequence:
    return SymbolSequence(tuple(w_prefix(n_terms)), (1, 2), "W")


def counterexample_report(n_ratio: int = 10, evidence: EvidenceReport | None = None, n_max: int = 10) -> dict:
    ls, ms = ln_mn_sequences(n_max)
    fr = frequency_check(n_ratio)
    return {
        "ln": ls,
        "mn": ms,
        "ratio_n": {"n": n_ratio, "m_n": ms[n_ratio] if n_ratio <= n_max else ln_mn(n_ratio).m,
                    "l_n": ls[n_ratio] if n_ratio <= n_max else ln_mn(n_ratio).l, "value": float(fr.ratio)},
        "dist_to_limit": fr.distance,
        "kernel_growth": evidence.to_json() if evidence else [],
    }
