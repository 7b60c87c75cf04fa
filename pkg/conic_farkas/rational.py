"""
Exact integer / rational helpers shared by the cone, bound and result modules.
"""

import math
from fractions import Fraction
from numbers import Rational
from typing import Any, Sequence, Tuple, Union

Number = Union[int, Fraction]
IntVector = Tuple[int, ...]


def parse_rational(value: Any) -> Fraction:
    """
    Parse an int, an integral-or-decimal JSON number, or a "p/q" string.

    Args:
        value: Raw JSON value

    Returns:
        Fraction: exact value

    Raises:
        ValueError: if the value is not a finite rational
    """
    if isinstance(value, bool):
        raise ValueError(f"boolean is not a rational number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite number: {value!r}")
        # repr() round-trips, so 0.1 parses as 1/10 rather than its binary expansion
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational: {value!r}") from e
    raise ValueError(f"not a rational: {value!r}")


def as_integer(value: Any) -> int:
    """
    Return value as an int if it is exactly integral.

    Raises:
        ValueError: if value is not an integer (2.0 is accepted, 2.5 is not)
    """
    q = parse_rational(value)
    if q.denominator != 1:
        raise ValueError(f"not an integer: {value!r}")
    return q.numerator


def format_rational(q: Number) -> Union[int, str]:
    """Render a rational as an int when integral, else as "p/q"."""
    q = Fraction(q)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def dot(u: Sequence[Rational], v: Sequence[Rational]) -> Number:
    """Exact inner product."""
    return sum((a * b for a, b in zip(u, v)), 0)


def vsub(u: Sequence[int], v: Sequence[int]) -> IntVector:
    return tuple(a - b for a, b in zip(u, v))


def vadd(u: Sequence[int], v: Sequence[int]) -> IntVector:
    return tuple(a + b for a, b in zip(u, v))


def vscale(c: int, v: Sequence[int]) -> IntVector:
    return tuple(c * a for a in v)


def ceil_rational(q: Number) -> int:
    """Exact ceiling; math.ceil on a Fraction never goes through float."""
    return math.ceil(Fraction(q))
