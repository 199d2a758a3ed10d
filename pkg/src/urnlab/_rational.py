"""Helpers for exact rationals: parsing, canonical strings, integer scaling."""

from fractions import Fraction
from math import lcm


def to_fraction(value) -> Fraction:
    """Parse an int, Fraction, or "p/q" string into a Fraction.

    Floats are rejected outright; they would silently import rounding error.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def fmt(value) -> str:
    """Canonical reduced "p/q" string (integers print without a denominator)."""
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def common_scale(values) -> int:
    """Least common multiple of the denominators of ``values``."""
    d = 1
    for v in values:
        d = lcm(d, Fraction(v).denominator)
    return d


def scale_to_ints(values):
    """Return (ints, D) with ints[i] == values[i] * D."""
    values = [Fraction(v) for v in values]
    d = common_scale(values)
    return [int(v * d) for v in values], d
