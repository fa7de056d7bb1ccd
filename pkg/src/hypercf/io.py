"""Reading and writing the text formats used by the command line.

* ``.seq``   comma-separated symbols (line breaks allowed, ``#`` starts a comment)
* ``.cf``    optional field header ``p=3`` (``p=2 s=2 modulus=1,1,1``) then ``[a_1, ..., a_n]``
* ``.ser``   field header, then ``top=<k> prec=<N|exact>``, then comma-separated coefficient codes
* ``.morph`` JSON ``{alphabet, images, output}``
* ``.spec``  JSON hyperquadratic spec

Syntax errors raise :class:`FormatError` carrying 1-based line and column.
"""

from __future__ import annotations

import io as _io
import json
import os
from typing import IO

from .algebra.field import FieldCtx
from .algebra.grammar import PolyParseError
from .algebra.series import LaurentSeries
from .automata import SymbolSequence
from .contfrac import ContinuedFraction, format_cf, parse_cf
from .hyperquad import FamilyParams, HyperquadraticSpec, spec_from_json, spec_to_json
from .substitution import Morphism


class FormatError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.source = source


def _read_text(src) -> tuple[str, str]:
    if hasattr(src, "read"):
        return src.read(), getattr(src, "name", "<stream>")
    with open(os.fspath(src), encoding="utf-8") as fh:
        return fh.read(), os.fspath(src)


def _write_text(dst, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if hasattr(dst, "write"):
        dst.write(text)
        return
    with open(os.fspath(dst), "w", encoding="utf-8") as fh:
        fh.write(text)


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


# -- sequences ----------------------------------------------------------------------------------


def _symbol(token: str):
    t = token.strip()
    if t.lstrip("-").isdigit():
        return int(t)
    return t


def parse_seq(text: str, alphabet=None, source: str = "<input>") -> SymbolSequence:
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        col = 0
        tokens = line.split(",")
        for idx, token in enumerate(tokens):
            stripped = token.strip()
            start = col + (len(token) - len(token.lstrip())) + 1
            if not stripped:
                # a trailing comma continues the sequence on the next line
                if idx != len(tokens) - 1 or idx == 0:
                    raise FormatError("empty symbol", lineno, start, source)
            else:
                if any(ch.isspace() for ch in stripped):
                    raise FormatError(f"symbols must be separated by commas near {stripped!r}", lineno, start, source)
                sym = _symbol(stripped)
                if alphabet is not None and sym not in alphabet:
                    raise FormatError(f"symbol {sym!r} is not in the alphabet {list(alphabet)}", lineno, start, source)
                terms.append(sym)
            col += len(token) + 1
    if not terms:
        raise FormatError("sequence file holds no symbols", 1, 1, source)
    return SymbolSequence(tuple(terms), tuple(alphabet) if alphabet is not None else (), source)


def read_seq(src, alphabet=None) -> SymbolSequence:
    text, name = _read_text(src)
    return parse_seq(text, alphabet, name)


def format_seq(v: SymbolSequence) -> str:
    return ",".join(str(t) for t in v.terms) + "\n"


def write_seq(v: SymbolSequence, dst):
    _write_text(dst, format_seq(v))


# -- field headers ----------------------------------------------------------------------------------


def parse_field_header(line: str, lineno: int = 1, source: str = "<input>") -> FieldCtx:
    fields = {}
    for part in line.split():
        if "=" not in part:
            raise FormatError(f"expected key=value, got {part!r}", lineno, line.find(part) + 1, source)
        key, val = part.split("=", 1)
        fields[key] = val
    if "p" not in fields:
        raise FormatError("field header needs p=<prime>", lineno, 1, source)
    try:
        p = int(fields["p"])
        s = int(fields.get("s", 1))
        modulus = tuple(int(x) for x in fields["modulus"].split(",")) if "modulus" in fields else None
        return FieldCtx(p, s, modulus)
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc), lineno, 1, source) from None


def format_field_header(ctx: FieldCtx) -> str:
    head = f"p={ctx.p}"
    if ctx.s > 1:
        head += f" s={ctx.s} modulus={','.join(str(c) for c in ctx.modulus)}"
    return head


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if line.strip():
            yield lineno, line


# -- continued fractions ----------------------------------------------------------------------------


def parse_cf_file(text: str, ctx: FieldCtx | None = None, source: str = "<input>") -> ContinuedFraction:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty continued-fraction file", 1, 1, source)
    if not lines[0][1].lstrip().startswith("["):
        ctx = parse_field_header(lines[0][1], lines[0][0], source)
        lines = lines[1:]
    if ctx is None:
        ctx = FieldCtx(3)
    if len(lines) != 1:
        raise FormatError("expected exactly one bracketed list", lines[1][0] if len(lines) > 1 else 1, 1, source)
    lineno, body = lines[0]
    try:
        return parse_cf(body, ctx)
    except PolyParseError as exc:
        raise FormatError(str(exc).rsplit(" at column", 1)[0], lineno, exc.column, source) from None


def read_cf(src, ctx: FieldCtx | None = None) -> ContinuedFraction:
    text, name = _read_text(src)
    return parse_cf_file(text, ctx, name)


def format_cf_file(cf: ContinuedFraction) -> str:
    return format_field_header(cf.ctx) + "\n" + format_cf(cf) + "\n"


def write_cf(cf: ContinuedFraction, dst):
    _write_text(dst, format_cf_file(cf))


# -- Laurent series ------------------------------------------------------------------------------------


def parse_series(text: str, source: str = "<input>") -> LaurentSeries:
    lines = list(_content_lines(text))
    if len(lines) < 2:
        raise FormatError("series file needs a field header and a top/prec line", 1, 1, source)
    ctx = parse_field_header(lines[0][1], lines[0][0], source)
    lineno, meta = lines[1]
    info = dict(part.split("=", 1) for part in meta.split() if "=" in part)
    if "top" not in info or "prec" not in info:
        raise FormatError("expected 'top=<k> prec=<N|exact>'", lineno, 1, source)
    try:
        top = int(info["top"])
        prec = None if info["prec"] == "exact" else int(info["prec"])
    except ValueError as exc:
        raise FormatError(str(exc), lineno, 1, source) from None
    codes = []
    for lineno, line in lines[2:]:
        col = 0
        for tok in line.split(","):
            t = tok.strip()
            if t:
                if not t.isdigit() or int(t) >= ctx.q:
                    raise FormatError(f"bad coefficient code {t!r}", lineno, col + tok.find(t) + 1, source)
                codes.append(int(t))
            col += len(tok) + 1
    return LaurentSeries(ctx, top, codes, prec)


def format_series(f: LaurentSeries) -> str:
    prec = "exact" if f.prec is None else str(f.prec)
    body = ",".join(str(c) for c in f.coeffs)
    return f"{format_field_header(f.ctx)}\ntop={f.top} prec={prec}\n{body}\n"


def read_series(src) -> LaurentSeries:
    text, name = _read_text(src)
    return parse_series(text, name)


def write_series(f: LaurentSeries, dst):
    _write_text(dst, format_series(f))


# -- JSON formats --------------------------------------------------------------------------------------


def _load_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno, exc.colno, source) from None


def parse_morph(text: str, source: str = "<input>") -> Morphism:
    data = _load_json(text, source)
    if not isinstance(data, dict) or "alphabet" not in data or "images" not in data:
        raise FormatError("morphism file needs 'alphabet' and 'images'", 1, 1, source)
    alphabet = tuple(data["alphabet"])
    images = {}
    for a, img in data["images"].items():
        images[a] = tuple(img) if isinstance(img, list) else tuple(img)
    try:
        return Morphism(alphabet, images, data.get("output") or {})
    except ValueError as exc:
        raise FormatError(str(exc), 1, 1, source) from None


def format_morph(m: Morphism) -> str:
    def word(w):
        return "".join(w) if all(isinstance(x, str) and len(x) == 1 for x in w) else list(w)

    data = {
        "alphabet": list(m.alphabet),
        "images": {a: word(m.images[a]) for a in m.alphabet},
        "output": {a: m.output_map[a] for a in m.alphabet},
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def read_morph(src) -> Morphism:
    text, name = _read_text(src)
    return parse_morph(text, name)


def write_morph(m: Morphism, dst):
    _write_text(dst, format_morph(m))


def parse_spec(text: str, source: str = "<input>") -> tuple[HyperquadraticSpec, FamilyParams | None]:
    data = _load_json(text, source)
    if not isinstance(data, dict):
        raise FormatError("spec file must hold a JSON object", 1, 1, source)
    try:
        return spec_from_json(data)
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc), 1, 1, source) from None


def read_spec(src):
    text, name = _read_text(src)
    return parse_spec(text, name)


def format_spec(spec: HyperquadraticSpec, params: FamilyParams | None = None) -> str:
    return json.dumps(spec_to_json(spec, params), indent=2, sort_keys=True) + "\n"


def write_spec(spec: HyperquadraticSpec, params: FamilyParams | None, dst):
    _write_text(dst, format_spec(spec, params))


def read_any(src, kind: str | None = None, **kw):
    """Dispatch on ``kind`` or the file extension."""
    if kind is None:
        name = getattr(src, "name", None) if hasattr(src, "read") else os.fspath(src)
        kind = os.path.splitext(name or "")[1].lstrip(".")
    readers = {"seq": read_seq, "cf": read_cf, "ser": read_series, "morph": read_morph, "spec": read_spec}
    if kind not in readers:
        raise ValueError(f"unknown input kind {kind!r}; expected one of {sorted(readers)}")
    return readers[kind](src, **kw)


def stream(text: str) -> IO[str]:
    return _io.StringIO(text)
