from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hypercf.algebra import FieldCtx, Poly

# "props" runs the algebra/contfrac invariants at 1000 samples each.
settings.register_profile(
    "props",
    max_examples=1000,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("dev", max_examples=100, deadline=None, derandomize=True)
settings.load_profile(os.environ.get("HYPERCF_HYPOTHESIS_PROFILE", "props"))

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "docs" / "schemas"

# F_p for several p, plus F_4 = F_2[x]/(x^2+x+1) and F_9 = F_3[x]/(x^2+1)
CONTEXTS = [
    FieldCtx(2),
    FieldCtx(3),
    FieldCtx(5),
    FieldCtx(7),
    FieldCtx(13),
    FieldCtx(2, 2, (1, 1, 1)),
    FieldCtx(3, 2, (1, 0, 1)),
]


@st.composite
def field_ctx(draw):
    return draw(st.sampled_from(CONTEXTS))


@st.composite
def codes(draw, ctx, nonzero=False):
    return draw(st.integers(1 if nonzero else 0, ctx.q - 1))


@st.composite
def polys(draw, ctx, max_deg=6, nonzero=False):
    deg = draw(st.integers(0, max_deg))
    cs = draw(st.lists(st.integers(0, ctx.q - 1), min_size=deg + 1, max_size=deg + 1))
    p = Poly(ctx, {e: c for e, c in enumerate(cs) if c})
    if nonzero and p.is_zero():
        p = Poly.one(ctx)
    return p


def load_schema(name: str) -> dict:
    return json.loads((SCHEMA_DIR / name).read_text())


@pytest.fixture
def schema_registry():
    from referencing import Registry, Resource

    resources = [(p.name, Resource.from_contents(json.loads(p.read_text()))) for p in SCHEMA_DIR.glob("*.json")]
    return Registry().with_resources(resources)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
