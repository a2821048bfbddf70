"""Floor sums and near-curve counts for the dilated parabola.

For a parabola ``y = alpha x^2 + beta x + gamma`` and dilation factor ``a``
the dilated curve is ``f(x) = alpha x^2 / a + beta x + gamma a``.  Every
quantity here is a sum over the integers ``1 <= x <= floor(b)``.

Internally ``f(x)`` is written as ``N(x) / D`` with integer
``N(x) = A x^2 + B x + C`` and ``D > 0``, so floors, fractional parts and
distances to the nearest integer reduce to integer ``divmod``.  Sums are
accumulated block by block over contiguous x-ranges; any partition of
``1..x_max`` gives the same exact result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .ratmath import HALF, as_rat, lcm

# int64 fast path is used while every intermediate stays below this
_I64_SAFE = 2**62

BLOCK = 1 << 18


@dataclass(frozen=True)
class Parabola:
    alpha: Fraction
    beta: Fraction = Fraction(0)
    gamma: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            object.__setattr__(self, name, as_rat(getattr(self, name)))
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")

    def negated(self) -> "Parabola":
        return Parabola(-self.alpha, -self.beta, -self.gamma)


P0 = Parabola(Fraction(1))


@dataclass(frozen=True)
class CountingInstance:
    """A parabola with dilation ``a`` and x-range bound ``b``.

    By default the hypotheses ``a > 1`` and ``b > 1`` are enforced.
    ``relaxed=True`` admits any ``a > 0`` and ``b >= 1``, which allows
    degenerate integer-valued test cases such as ``a = 1``.
    """

    parabola: Parabola
    a: Fraction
    b: Fraction
    relaxed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a", as_rat(self.a))
        object.__setattr__(self, "b", as_rat(self.b))
        if self.relaxed:
            if self.a <= 0 or self.b < 1:
                raise ValueError(f"relaxed mode needs a > 0, b >= 1 (a={self.a}, b={self.b})")
        elif self.a <= 1 or self.b <= 1:
            raise ValueError(f"need a > 1 and b > 1 (a={self.a}, b={self.b})")

    @property
    def x_max(self) -> int:
        return self.b.numerator // self.b.denominator

    @cached_property
    def delta_cap(self) -> float:
        """``max(b^2 sqrt(a) / (a + b), 3)``."""
        a, b = float(self.a), float(self.b)
        return max(b * b * math.sqrt(a) / (a + b), 3.0)

    @cached_property
    def poly(self) -> tuple[int, int, int, int]:
        """Integers ``(A, B, C, D)`` with ``f(x) = (A x^2 + B x + C) / D``."""
        p = self.parabola
        quad = p.alpha / self.a
        const = p.gamma * self.a
        d = lcm(quad.denominator, p.beta.denominator, const.denominator)
        return (
            quad.numerator * (d // quad.denominator),
            p.beta.numerator * (d // p.beta.denominator),
            const.numerator * (d // const.denominator),
            d,
        )

    def numerators(self, lo: int, hi: int) -> np.ndarray:
        """``N(x)`` for ``lo <= x <= hi``; int64 when it cannot overflow, else object."""
        A, B, C, D = self.poly
        if D < _I64_SAFE and abs(A) * hi * hi + abs(B) * hi + abs(C) < _I64_SAFE:
            x = np.arange(lo, hi + 1, dtype=np.int64)
        else:
            x = np.arange(lo, hi + 1, dtype=object)
            A, B, C = int(A), int(B), int(C)
        return (A * x + B) * x + C

    def residues(self, lo: int = 1, hi: int | None = None) -> np.ndarray:
        """``N(x) mod D`` so that ``frac(f(x)) = residue / D``."""
        hi = self.x_max if hi is None else hi
        A, B, C, D = self.poly
        if D < 2**31 and hi < 2**31:
            # every product below stays under D * 2^31 < 2^62
            x = np.arange(lo, hi + 1, dtype=np.int64)
            return ((A % D) * (x * x % D) % D + (B % D) * x % D + C % D) % D
        r = self.numerators(lo, hi) % D
        if r.dtype == object and D < _I64_SAFE:
            r = r.astype(np.int64)
        return r


def instance(alpha, beta, gamma, a, b, relaxed=False) -> CountingInstance:
    """Build an instance from ints, Fractions or rational strings."""
    return CountingInstance(Parabola(alpha, beta, gamma), a, b, relaxed)


def blocks(lo: int, hi: int, size: int = BLOCK):
    """Contiguous ``(start, stop)`` pairs covering ``lo..hi`` inclusive."""
    start = lo
    while start <= hi:
        stop = min(start + size - 1, hi)
        yield start, stop
        start = stop + 1


def f_value(inst: CountingInstance, x: int) -> Fraction:
    if not 1 <= x <= inst.x_max:
        raise ValueError(f"x={x} outside 1..{inst.x_max}")
    p = inst.parabola
    return p.alpha * x * x / inst.a + p.beta * x + p.gamma * inst.a


def exact_sum(arr: np.ndarray) -> int:
    """Sum an integer array without int64 wraparound."""
    if arr.size == 0:
        return 0
    if arr.dtype != object and int(np.abs(arr).max()) * arr.size < 2**63:
        return int(arr.sum())
    return sum(arr.tolist())


def floor_sum_block(inst: CountingInstance, lo: int, hi: int) -> int:
    return exact_sum(inst.numerators(lo, hi) // inst.poly[3])


def floor_sum(inst: CountingInstance) -> int:
    """``sum floor(f(x))`` over ``1 <= x <= b``, term by term."""
    return sum(floor_sum_block(inst, lo, hi) for lo, hi in blocks(1, inst.x_max))


def main_term(inst: CountingInstance) -> Fraction:
    """``sum (f(x) - 1/2)`` via closed-form power sums."""
    m = inst.x_max
    p = inst.parabola
    s1 = Fraction(m * (m + 1), 2)
    s2 = Fraction(m * (m + 1) * (2 * m + 1), 6)
    return p.alpha / inst.a * s2 + p.beta * s1 + (p.gamma * inst.a - HALF) * m


def psi_sum_block(inst: CountingInstance, lo: int, hi: int) -> Fraction:
    r = inst.residues(lo, hi)
    return Fraction(exact_sum(r), inst.poly[3]) - Fraction(hi - lo + 1, 2)


def psi_sum(inst: CountingInstance) -> Fraction:
    """Signed rounding-error sum ``sum psi(f(x))``."""
    return sum((psi_sum_block(inst, lo, hi) for lo, hi in blocks(1, inst.x_max)), Fraction(0))


def error_term(inst: CountingInstance) -> tuple[Fraction, Fraction]:
    """``(signed, abs)`` where ``signed = floor_sum - main_term``."""
    signed = floor_sum(inst) - main_term(inst)
    return signed, abs(signed)


def _check_delta(delta: Fraction) -> Fraction:
    delta = as_rat(delta)
    if not 0 < delta < HALF:
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
    return delta


def near_count_block(inst: CountingInstance, delta: Fraction, lo: int, hi: int) -> int:
    d = inst.poly[3]
    # ||r/D|| < delta  <=>  min(r, D - r) < ceil(delta * D)
    threshold = -((-delta.numerator * d) // delta.denominator)
    r = inst.residues(lo, hi)
    return int(np.count_nonzero(np.minimum(r, d - r) < threshold))


def near_count(inst: CountingInstance, delta) -> int:
    """Number of ``1 <= x <= b`` with ``||f(x)|| < delta`` (strict)."""
    delta = _check_delta(delta)
    return sum(near_count_block(inst, delta, lo, hi) for lo, hi in blocks(1, inst.x_max))


def near_count_error(inst: CountingInstance, delta) -> Fraction:
    """``near_count - 2 delta b``, using the real ``b``.

    Subtracting ``2 delta floor(b)`` instead changes the value by less than 1.
    """
    delta = _check_delta(delta)
    return near_count(inst, delta) - 2 * delta * inst.b
