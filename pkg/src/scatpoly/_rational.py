"""Parsing and rendering of exact rationals for JSON/CSV transport."""

from __future__ import annotations

from fractions import Fraction


def parse_rational(value) -> Fraction:
    """Accept ``"num/den"``, integer or decimal strings, ints and floats.

    Decimal strings are read literally (``"0.25" -> 1/4``). Floats go through
    ``repr`` first so ``0.1`` becomes ``1/10`` rather than its binary value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as a rational")


def format_rational(x) -> str:
    return str(Fraction(x))


def format_float(x) -> str:
    """17 significant digits: round-trip safe for doubles."""
    return format(float(x), ".17g")
