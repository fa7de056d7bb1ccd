"""Input validation helpers shared by the library, the estimators and the CLI."""

from __future__ import annotations

import numbers
from collections.abc import Iterable, Sequence


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p, name: str = "p") -> int:
    p = check_int(p, name, minimum=2)
    if not is_prime(p):
        raise ValueError(f"{name}={p} is not prime")
    return p


def check_int(value, name: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def power_exponent(r: int, p: int) -> int | None:
    """Return t with r == p**t, or None when r is not a power of p."""
    if r < 1:
        return None
    t = 0
    while r % p == 0:
        r //= p
        t += 1
    return t if r == 1 else None


def check_power_of(r, p: int, name: str = "r", minimum_exponent: int = 0) -> int:
    r = check_int(r, name, minimum=1)
    t = power_exponent(r, p)
    if t is None:
        raise ValueError(f"{name}={r} is not a power of p={p}")
    if t < minimum_exponent:
        raise ValueError(f"{name}={r} must be p^t with t >= {minimum_exponent}")
    return r


def check_sequence(terms: Iterable, alphabet: Sequence | None = None, name: str = "sequence") -> list:
    terms = list(terms)
    if not terms:
        raise ValueError(f"{name} is empty")
    if alphabet is not None:
        allowed = set(alphabet)
        for i, t in enumerate(terms, start=1):
            if t not in allowed:
                raise ValueError(f"{name}[{i}]={t!r} is not in the alphabet {sorted(allowed, key=repr)}")
    return terms


def check_indices(indices, name: str = "n") -> list[int]:
    """Accept an int, an iterable of ints, or an integer array; all entries must be >= 1."""
    if isinstance(indices, numbers.Integral):
        indices = [indices]
    out = []
    for x in indices:
        x = check_int(x, name, minimum=1)
        out.append(x)
    return out
