"""Quadratic exponential sums and the bounds built from them.

``S(h) = sum_{1 <= x <= b} e(h f(x))`` with ``e(t) = exp(2 pi i t)``.  In
the default ``"exact"`` mode every phase ``h f(x)`` is reduced mod 1 as an
exact rational before the single sine/cosine evaluation, so the result is
accurate to a few ulps per term no matter how large ``h f(x)`` gets.  The
``"direct"`` mode forms ``h f(x)`` in double precision and exists to show
what is lost without the reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .counting import CountingInstance, blocks
from .ratmath import as_rat, frac

VAALER_CONST = 1 + 1 / math.pi
ERDOS_TURAN_CONST = 3

_I64_SAFE = 2**62
TWO_PI = 2 * math.pi


def unit(t: np.ndarray) -> np.ndarray:
    """``e(t)`` for an array of reduced phases."""
    return np.cos(TWO_PI * t) + 1j * np.sin(TWO_PI * t)


def _reduced(num: np.ndarray, mod: int) -> np.ndarray:
    """``(num mod mod) / mod`` as float64, whatever the dtype of ``num``."""
    red = num % mod
    if red.dtype == object:
        return np.array([v / mod for v in red.tolist()], dtype=np.float64)
    return red.astype(np.float64) / mod


def _scaled_residues(r: np.ndarray, h: int, d: int) -> np.ndarray:
    if r.dtype != object and h * d < _I64_SAFE:
        return (h * r) % d
    return (h * r.astype(object)) % d


def exp_sum(inst: CountingInstance, h: int, mode: str = "exact") -> complex:
    if h < 1:
        raise ValueError("h must be a positive integer")
    if mode == "exact":
        d = inst.poly[3]
        total = 0j
        for lo, hi in blocks(1, inst.x_max):
            r = inst.residues(lo, hi)
            total += complex(unit(_reduced(_scaled_residues(r, h, d), d)).sum())
        return total
    if mode == "direct":
        p = inst.parabola
        alpha, beta, gamma = float(p.alpha), float(p.beta), float(p.gamma)
        a = float(inst.a)
        x = np.arange(1, inst.x_max + 1, dtype=np.float64)
        phase = h * (alpha * x * x / a + beta * x + gamma * a)
        return complex(np.exp(1j * TWO_PI * phase).sum())
    raise ValueError(f"unknown phase mode {mode!r}")


@dataclass
class ExpSumSeries:
    inst: CountingInstance
    H: int
    values: np.ndarray
    phase_mode: str = "exact"

    def __post_init__(self):
        if len(self.values) != self.H:
            raise ValueError("need exactly H values")

    def __getitem__(self, h: int) -> complex:
        """``S(h)``, 1-based."""
        if not 1 <= h <= self.H:
            raise IndexError(h)
        return complex(self.values[h - 1])

    def moduli(self, H: int | None = None) -> np.ndarray:
        return np.abs(self.values[: self.H if H is None else H])

    def to_json(self) -> list[list[float]]:
        return [[float(v.real), float(v.imag)] for v in self.values]


def exp_sum_series(inst: CountingInstance, H: int, mode: str = "exact") -> ExpSumSeries:
    """``S(1), ..., S(H)``, sharing one residue computation across all h."""
    if H < 1:
        raise ValueError("H must be a positive integer")
    if mode == "direct":
        vals = [exp_sum(inst, h, "direct") for h in range(1, H + 1)]
        return ExpSumSeries(inst, H, np.array(vals, dtype=np.complex128), mode)
    d = inst.poly[3]
    vals = np.zeros(H, dtype=np.complex128)
    for lo, hi in blocks(1, inst.x_max):
        r = inst.residues(lo, hi)
        for h in range(1, H + 1):
            vals[h - 1] += unit(_reduced(_scaled_residues(r, h, d), d)).sum()
    return ExpSumSeries(inst, H, vals, mode)


def _series(inst, H, series):
    if series is None or series.H < H:
        return exp_sum_series(inst, H)
    return series


def weighted_abs_sum(inst: CountingInstance, H: int, series: ExpSumSeries | None = None) -> float:
    """``sum_{h <= H} |S(h)| / h``."""
    s = _series(inst, H, series)
    return float(np.sum(s.moduli(H) / np.arange(1, H + 1)))


def vaaler_bound(inst: CountingInstance, H: int, series: ExpSumSeries | None = None) -> float:
    """Upper bound for ``|sum psi(f(x))|`` from Vaaler's trigonometric approximation."""
    return inst.x_max / (2 * H + 2) + VAALER_CONST * weighted_abs_sum(inst, H, series)


def erdos_turan_bound(inst: CountingInstance, H: int, series: ExpSumSeries | None = None) -> float:
    """Upper bound for ``|D(N; xi, eta)|`` of the sequence ``f(x)`` mod 1."""
    return inst.x_max / (H + 1) + ERDOS_TURAN_CONST * weighted_abs_sum(inst, H, series)


def harmonic(H: int) -> float:
    return math.fsum(1 / h for h in range(1, H + 1))


def second_moment_lhs(inst: CountingInstance, H: int, series: ExpSumSeries | None = None) -> float:
    """``sum_{h <= H} |S(h)|^2 / h``."""
    s = _series(inst, H, series)
    return float(np.sum(s.moduli(H) ** 2 / np.arange(1, H + 1)))


def cauchy_schwarz_rhs(inst: CountingInstance, H: int, series: ExpSumSeries | None = None) -> float:
    """``(sum 1/h)^(1/2) (sum |S(h)|^2 / h)^(1/2)``, which dominates :func:`weighted_abs_sum`."""
    return math.sqrt(harmonic(H) * second_moment_lhs(inst, H, series))


@dataclass(frozen=True)
class DiscrepancyWindow:
    xi: Fraction
    eta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "xi", as_rat(self.xi))
        object.__setattr__(self, "eta", as_rat(self.eta))
        if not self.xi < self.eta < self.xi + 1:
            raise ValueError(f"need xi < eta < xi + 1, got ({self.xi}, {self.eta})")

    @property
    def length(self) -> Fraction:
        return self.eta - self.xi


def window_count(inst: CountingInstance, window: DiscrepancyWindow) -> int:
    """``Z``: how many ``f(x)`` fall in the open interval ``(xi, eta)`` mod 1."""
    d = inst.poly[3]
    xi = window.xi
    L = d * xi.denominator
    shift = (xi.numerator * d) % L
    # frac(f - xi) = s / L; membership is 0 < s < length * L
    width = window.length * L
    ceil_width = -((-width.numerator) // width.denominator)
    count = 0
    for lo, hi in blocks(1, inst.x_max):
        r = inst.residues(lo, hi)
        if r.dtype == object or L * 2 >= _I64_SAFE:
            r = r.astype(object)
        s = (r * xi.denominator - shift) % L
        count += int(np.count_nonzero((s > 0) & (s < ceil_width)))
    return count


def discrepancy(inst: CountingInstance, window: DiscrepancyWindow) -> Fraction:
    """``Z - (eta - xi) N`` with ``N = floor(b)``, exact."""
    return window_count(inst, window) - window.length * inst.x_max


def geometric_inner_sum(theta, n: int) -> complex:
    """``sum_{y=1}^{n} e(theta y)`` for rational ``theta``.

    Evaluated as ``e((n+1) t / 2) sin(pi n t) / sin(pi t)`` with ``t = frac(theta)``,
    which equals ``e(t) (e(n t) - 1) / (e(t) - 1)`` but does not cancel
    catastrophically when ``t`` is close to an integer.
    """
    if n < 1:
        raise ValueError("n must be positive")
    t = frac(as_rat(theta))
    if t == 0:
        return complex(n)
    k, d = t.numerator, t.denominator
    mag = math.sin(math.pi * ((n * k) % (2 * d)) / d) / math.sin(math.pi * k / d)
    ph = TWO_PI * (((n + 1) * k) % (2 * d)) / (2 * d)
    return complex(mag * math.cos(ph), mag * math.sin(ph))


IDENTITY_RTOL = 1e-9


def identity_holds(lhs: float, weyl: float, imag: float = 0.0, rtol: float = IDENTITY_RTOL) -> bool:
    """Agreement of the two second-moment forms, relative to ``max(|lhs|, |weyl|, 1)``.

    The floor at 1 only matters when both sides vanish (e.g. ``S(h) = 0``
    for every ``h``), where a purely relative test compares rounding noise.
    """
    scale = max(abs(lhs), abs(weyl), 1.0)
    return abs(weyl - lhs) <= rtol * scale and abs(imag) < rtol * (1 + abs(weyl))


def _obj(v: np.ndarray, big: bool) -> np.ndarray:
    return v.astype(object) if big else v


def second_moment_weyl(inst: CountingInstance, H: int, return_imag: bool = False):
    """The Weyl-differenced form of :func:`second_moment_lhs`.

    Expands ``|S(h)|^2`` over shifts ``x = y + l`` with ``|l| < N``::

        sum_h (1/h) sum_l e(h(alpha l^2/a + beta l)) sum_{y, y+l in [1, N]} e(2 alpha h l y / a)

    Each inner geometric sum is evaluated in closed form with exactly reduced
    phases.  With ``return_imag=True`` also returns the imaginary residual,
    which vanishes in exact arithmetic.
    """
    if H < 1:
        raise ValueError("H must be a positive integer")
    A, B, _, d = inst.poly
    A, B = A % d, B % d
    m = inst.x_max
    big = d >= 2**31
    l = np.arange(-(m - 1), m, dtype=np.int64)
    n = m - np.abs(l)
    y0m1 = np.maximum(0, -l)  # first y is max(1, 1 - l)
    l_mod = _obj(l % d, big)
    l2_mod = _obj((l * l) % d, big) if not big else (l.astype(object) ** 2) % d
    n_o, y0_o = _obj(n, big), _obj(y0m1, big)
    total = 0j
    for h in range(1, H + 1):
        k = (2 * A * h % d) * l_mod % d  # theta = k / d
        outer = (h * A % d) * l2_mod % d + (h * B % d) * l_mod % d
        p = (outer + k * y0_o % d) % d
        zero = k == 0
        kk = np.where(zero, 1, k)
        with np.errstate(divide="ignore", invalid="ignore"):  # masked below
            mag = np.sin(np.pi * _reduced(n_o * kk, 2 * d) * 2) / np.sin(np.pi * _reduced(kk, d))
        mag = np.where(zero, n.astype(np.float64), mag)
        ph = np.where(zero, _reduced(2 * p, 2 * d), _reduced(2 * p + (n_o + 1) * kk, 2 * d))
        total += complex(np.sum(mag * unit(ph))) / h
    if return_imag:
        return total.real, total.imag
    return total.real
