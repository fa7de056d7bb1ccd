"""Exact arithmetic over F_q: field elements, polynomials in T, Laurent series in 1/T."""

from .field import FieldCtx, FieldElement, FieldMismatchError, field_arith
from .grammar import PolyParseError, format_poly, parse_poly
from .poly import DEG_ZERO, InexactDivisionError, Poly, poly_divmod, poly_gcd, poly_pow
from .series import (
    LaurentSeries,
    PrecisionError,
    evaluate_polynomial,
    hensel_root,
    series_inverse,
    series_poly_part,
    series_pow_frobenius,
)

__all__ = [
    "DEG_ZERO",
    "FieldCtx",
    "FieldElement",
    "FieldMismatchError",
    "InexactDivisionError",
    "LaurentSeries",
    "Poly",
    "PolyParseError",
    "PrecisionError",
    "evaluate_polynomial",
    "field_arith",
    "format_poly",
    "hensel_root",
    "parse_poly",
    "poly_divmod",
    "poly_gcd",
    "poly_pow",
    "series_inverse",
    "series_poly_part",
    "series_pow_frobenius",
]
