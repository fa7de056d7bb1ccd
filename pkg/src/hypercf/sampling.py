"""Replayable sampling of family members and the oracle-equivalence sweep.

All randomness comes from ``random.Random(seed)`` (Python's Mersenne Twister),
so a sweep is determined by its seed.  Instances are independent; with
``workers > 1`` they run in a process pool and are merged back in sample order.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .algebra.field import FieldCtx
from .algebra.poly import Poly
from .hyperquad import (
    FamilyParams,
    HyperquadraticSpec,
    bootstrap_expand,
    closed_form,
    family_spec,
    root_residual,
    series_for_residual,
    spec_from_json,
    spec_to_json,
)

GENERATOR = "random.Random (Mersenne Twister)"
DEFAULT_PRIMES = (3, 5, 7, 13)


def sample_prefix_poly(rng: random.Random, ctx: FieldCtx, max_deg: int = 3) -> Poly:
    """Random polynomial of degree 1..max_deg divisible by T."""
    d = rng.randint(1, max_deg)
    terms = {e: rng.randrange(ctx.q) for e in range(1, d)}
    terms[d] = rng.randrange(1, ctx.q)
    return Poly(ctx, {e: c for e, c in terms.items() if c})


def sample_family(
    rng: random.Random,
    family: str,
    primes=DEFAULT_PRIMES,
    max_l: int = 4,
    max_deg: int = 3,
) -> tuple[HyperquadraticSpec, FamilyParams]:
    """One member of F1, F2 or F3 over a prime field, r in {p, p^2}."""
    p = rng.choice(list(primes))
    ctx = FieldCtx(p)
    r = p ** rng.choice((1, 2))
    if family == "F3" and r <= 2:
        r = p * p
    l = rng.randint(1, max_l)  # noqa: E741
    A = [sample_prefix_poly(rng, ctx, max_deg) for _ in range(l)]

    def nonzero():
        return ctx.element(rng.randrange(1, p))

    if family == "F1":
        params = FamilyParams("F1", eps=nonzero())
    else:
        params = FamilyParams(family, eps1=nonzero(), eps2=nonzero())
    return family_spec(ctx, r, A, params), params


@dataclass
class SweepResult:
    index: int
    spec: dict
    n_pq: int
    agree: bool
    certified: int
    residual_certified: bool
    residual_valuation: int
    residual_threshold: int
    error: str = ""

    def to_json(self) -> dict:
        return dict(self.__dict__)


def check_instance(spec: HyperquadraticSpec, params: FamilyParams, n_pq: int, residual_target: int = 400):
    """Bootstrap vs closed form, plus the residual of a series approximation."""
    boot = bootstrap_expand(spec, n_pq)
    ref = closed_form(spec, params, n_pq)
    agree = len(boot) == n_pq and boot.pqs == ref.pqs
    approx = series_for_residual(ref, residual_target)
    res = root_residual(spec, approx)
    return agree, boot.certified, res


def _run_one(job):
    index, data, n_pq = job
    spec, params = spec_from_json(data)
    try:
        agree, certified, res = check_instance(spec, params, n_pq)
    except Exception as exc:  # reported per instance, never hidden
        return SweepResult(index, data, n_pq, False, 0, False, 0, 0, f"{type(exc).__name__}: {exc}")
    return SweepResult(index, data, n_pq, agree, certified, res.certified, res.valuation, res.threshold)


def oracle_sweep(seed: int, count: int, n_pq: int = 200, families=("F2", "F3"), workers: int = 1) -> list[SweepResult]:
    """``count`` samples per family; results in sample order whatever ``workers`` is."""
    rng = random.Random(seed)
    jobs = []
    for fam in families:
        for _ in range(count):
            spec, params = sample_family(rng, fam)
            jobs.append((len(jobs), spec_to_json(spec, params), n_pq))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_one, jobs))
    return [_run_one(j) for j in jobs]
