"""Exact rational plumbing shared across the package.

Theorem-derived inequalities are compared in exact arithmetic, so user
inputs (CLI decimals, JSON fields) are normalized to Fraction as early
as possible and floats appear only in reports.
"""

from __future__ import annotations

from fractions import Fraction


def as_fraction(x) -> Fraction:
    """Exact Fraction from int, Fraction, decimal string, or float.

    Floats go through their shortest repr, so as_fraction(0.005) is
    exactly 1/200 rather than the nearest binary double.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


def fraction_str(f: Fraction) -> str:
    """Serialize as "num/den" (or "num" when integral)."""
    f = Fraction(f)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def round_sig(x: float, digits: int = 12) -> float:
    """Round to a fixed number of significant digits for stable reports."""
    return float(f"{x:.{digits}g}")


def report_number(x) -> float:
    """Float for JSON output, rounded so equal rationals print equally."""
    if isinstance(x, Fraction):
        x = x.numerator / x.denominator
    return round_sig(float(x))
