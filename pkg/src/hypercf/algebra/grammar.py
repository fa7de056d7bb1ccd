"""Text form of polynomials: ``2*T^3+T+1``, ``T``, ``0``.

Grammar (whitespace ignored)::

    poly  := term ("+" term)*
    term  := coeff "*" "T" ["^" exp] | "T" ["^" exp] | coeff
    coeff := digits                      (s = 1, value in [0, p))
           | "(" digits ("," digits)* ")"  (s > 1, c_{s-1}, ..., c_0)
"""

from __future__ import annotations

from .field import FieldCtx
from .poly import Poly


class PolyParseError(ValueError):
    """Syntax error; ``column`` is 1-based within the parsed text."""

    def __init__(self, message: str, column: int, text: str = ""):
        super().__init__(f"{message} at column {column}")
        self.column = column
        self.text = text


class _Parser:
    def __init__(self, text: str, ctx: FieldCtx, offset: int = 0):
        self.text = text
        self.ctx = ctx
        self.i = 0
        self.offset = offset

    def error(self, msg: str, pos: int | None = None):
        pos = self.i if pos is None else pos
        raise PolyParseError(msg, pos + 1 + self.offset, self.text)

    def skip_ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.i] if self.i < len(self.text) else ""

    def digits(self) -> int:
        self.skip_ws()
        start = self.i
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        if start == self.i:
            self.error("expected a number")
        return int(self.text[start:self.i])

    def coeff(self) -> int:
        ctx = self.ctx
        start = self.i
        if ctx.s == 1 or self.peek().isdigit():
            # bare integers are prime-field constants in any F_q
            v = self.digits()
            if v >= ctx.p:
                self.error(f"coefficient {v} not in [0, {ctx.p})", start)
            return v
        if self.peek() != "(":
            self.error(f"expected '(' opening an F_{ctx.q} coefficient vector")
        self.i += 1
        comps = [self.digits()]
        while self.peek() == ",":
            self.i += 1
            comps.append(self.digits())
        if self.peek() != ")":
            self.error("expected ')'")
        self.i += 1
        if len(comps) != ctx.s:
            self.error(f"coefficient vector needs {ctx.s} components", start)
        if any(c >= ctx.p for c in comps):
            self.error(f"vector component not in [0, {ctx.p})", start)
        return ctx.from_vector(list(reversed(comps)))

    def power(self) -> int:
        if self.peek() == "^":
            self.i += 1
            return self.digits()
        return 1

    def term(self) -> tuple[int, int]:
        ch = self.peek()
        if ch == "T":
            self.i += 1
            return self.power(), 1
        if not ch:
            self.error("unexpected end of input")
        if not (ch.isdigit() or ch == "("):
            self.error(f"unexpected character {ch!r}")
        c = self.coeff()
        if self.peek() == "*":
            star = self.i
            self.i += 1
            if self.peek() != "T":
                self.error("expected 'T' after '*'", star)
            self.i += 1
            return self.power(), c
        return 0, c

    def parse(self) -> Poly:
        ctx = self.ctx
        terms: dict[int, int] = {}
        while True:
            e, c = self.term()
            terms[e] = ctx.add(terms.get(e, 0), c)
            ch = self.peek()
            if not ch:
                break
            if ch != "+":
                self.error(f"unexpected character {ch!r}")
            self.i += 1
        return Poly(ctx, terms)


def parse_poly(text: str, ctx: FieldCtx, column_offset: int = 0) -> Poly:
    return _Parser(text, ctx, column_offset).parse()


def format_poly(poly: Poly) -> str:
    """Canonical form: descending exponents, unit coefficients omitted on T terms."""
    ctx = poly.ctx
    if poly.is_zero():
        return "0"
    parts = []
    for e in sorted(poly.terms, reverse=True):
        c = poly.terms[e]
        cs = ctx.format_code(c)
        if e == 0:
            parts.append(cs)
            continue
        mono = "T" if e == 1 else f"T^{e}"
        parts.append(mono if c == 1 else f"{cs}*{mono}")
    return "+".join(parts)
