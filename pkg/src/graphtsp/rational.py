"""Canonical ``p/q`` text form for exact rationals."""

from fractions import Fraction

from .errors import ParseError


def fmt(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse(text: str) -> Fraction:
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ParseError(f"not a rational: {text!r}") from None
    if d <= 0:
        raise ParseError(f"denominator must be positive: {text!r}")
    q = Fraction(p, d)
    if sep and (q.numerator != p or q.denominator != d):
        raise ParseError(f"not in lowest terms: {text!r}")
    return q


def ceil_div(q: Fraction) -> int:
    """Ceiling of a rational, exactly."""
    return -((-q.numerator) // q.denominator)
