"""Exact rationals and the mod-1 primitives.

``Rat`` is :class:`fractions.Fraction`: arbitrary-precision numerator and a
positive denominator, always stored reduced, with structural equality.
Irrational parameters must be passed as rational approximants; every
downstream quantity is then exact for the approximant.
"""

from __future__ import annotations

import math
from fractions import Fraction

Rat = Fraction

HALF = Fraction(1, 2)


def as_rat(x) -> Fraction:
    """Coerce ints, Fractions and strings to ``Rat``; floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rat(x)
    raise TypeError(f"expected int, Fraction or str, got {type(x).__name__}")


def parse_rat(s: str) -> Fraction:
    """Parse ``"num/den"``, an integer, or a decimal literal exactly.

    >>> parse_rat("0.25")
    Fraction(1, 4)
    >>> parse_rat("-6/4")
    Fraction(-3, 2)
    """
    s = s.strip()
    if not s:
        raise ValueError("empty rational literal")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational literal {s!r}") from exc


def format_rat(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def frac(x: Fraction) -> Fraction:
    """Fractional part, in [0, 1)."""
    return Fraction(x.numerator % x.denominator, x.denominator)


def psi(x: Fraction) -> Fraction:
    """Sawtooth ``frac(x) - 1/2``, in [-1/2, 1/2)."""
    return frac(x) - HALF


def dist_nearest_int(x: Fraction) -> Fraction:
    r = x.numerator % x.denominator
    return Fraction(min(r, x.denominator - r), x.denominator)


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out
