"""Divisor functions, the resonance sums I, I1, I2, and the error envelopes.

The resonance weight of an integer ``j`` is
``min(2b, ||2 alpha j / a||^-1)``, taken to be ``2b`` when
``2 alpha j / a`` is an integer.  Membership and the distance
``||.||`` are decided exactly; only the final accumulation is in floats.

All envelopes carry a free constant ``C`` and slack ``epsilon``
(:class:`EnvelopeParams`); they are shapes to ratio-test against, not
certified bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .counting import CountingInstance
from .ratmath import as_rat, floor

LN2 = math.log(2)


@dataclass(frozen=True)
class EnvelopeParams:
    epsilon: float = 0.05
    C: float = 1.0

    def __post_init__(self):
        if not (self.epsilon > 0 and self.C > 0):
            raise ValueError("epsilon and C must be positive")


# -- arithmetic functions -----------------------------------------------------


def _divisor_pairs(j: int):
    if j < 1:
        raise ValueError("j must be a positive integer")
    for h in range(1, math.isqrt(j) + 1):
        if j % h == 0:
            yield h
            if h * h != j:
                yield j // h


def sigma(j: int) -> int:
    return sum(_divisor_pairs(j))


def num_divisors(j: int) -> int:
    return sum(1 for _ in _divisor_pairs(j))


def g_trunc(j: int, b) -> int:
    """Sum of the divisors ``h`` of ``j`` with ``h < b``."""
    b = as_rat(b)
    return sum(h for h in _divisor_pairs(j) if h < b)


def spf_table(n: int) -> np.ndarray:
    """Smallest prime factor of every ``0 <= k <= n`` (0 and 1 map to themselves)."""
    spf = np.arange(n + 1, dtype=np.int64)
    for p in range(2, math.isqrt(n) + 1):
        if spf[p] == p:
            block = spf[p * p :: p]
            mask = block == np.arange(p * p, n + 1, p)
            block[mask] = p
    return spf


def factorize(j: int, spf: np.ndarray | None = None) -> dict[int, int]:
    out: dict[int, int] = {}
    if spf is not None and j < len(spf):
        while j > 1:
            p = int(spf[j])
            out[p] = out.get(p, 0) + 1
            j //= p
        return out
    p = 2
    while p * p <= j:
        while j % p == 0:
            out[p] = out.get(p, 0) + 1
            j //= p
        p += 1
    if j > 1:
        out[j] = out.get(j, 0) + 1
    return out


def divisor_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(d, sigma)`` for ``0..n``.

    Each divisor pair ``h * k = j`` with ``h <= k`` is visited once, so only
    ``sqrt(n)`` vectorised passes are needed.
    """
    d = np.zeros(n + 1, dtype=np.int64)
    s = np.zeros(n + 1, dtype=np.int64)
    for h in range(1, math.isqrt(n) + 1):
        k = np.arange(h, n // h + 1, dtype=np.int64)
        j = h * k
        d[j] += 2
        s[j] += h + k
        d[h * h] -= 1
        s[h * h] -= h
    return d, s


def g_table(n: int, b) -> np.ndarray:
    """``g(j)`` for ``0 <= j <= n``: only divisors below ``b`` contribute."""
    b = as_rat(b)
    g = np.zeros(n + 1, dtype=np.int64)
    top = min(n, -(-b.numerator // b.denominator) - 1)  # largest integer < b
    for h in range(1, top + 1):
        g[h::h] += h
    return g


def divisor_envelope_f(j: float, epsilon: float) -> float:
    """``exp((1 + eps) ln2 log j / log log j)``, the growth shape of ``d(j)``."""
    if j < 3:
        raise ValueError("need j >= 3 so that log log j > 0")
    lj = math.log(j)
    return math.exp((1 + epsilon) * LN2 * lj / math.log(lj))


# -- proof parameters -----------------------------------------------------------


def harmonic_cutoff(a, b) -> int:
    """``floor(2 sqrt(a) b / (a + b))`` without touching floats."""
    a, b = as_rat(a), as_rat(b)
    t = 4 * a * b * b / ((a + b) ** 2)
    return math.isqrt(floor(t))


@dataclass(frozen=True)
class ProofParameters:
    q: Fraction
    H: int
    Delta: float

    @property
    def trivial(self) -> bool:
        """True when ``H = 0``, i.e. ``b`` is too small for the harmonic cutoff."""
        return self.H < 1


def proof_parameters(inst: CountingInstance) -> ProofParameters:
    return ProofParameters(
        q=inst.a / (2 * inst.parabola.alpha),
        H=harmonic_cutoff(inst.a, inst.b),
        Delta=inst.delta_cap,
    )


def trivial_case(inst: CountingInstance) -> bool:
    """``b^2 <= a``: the error is at most ``b/2 <= sqrt(a)/2`` outright."""
    return inst.b * inst.b <= inst.a


# -- resonance sums -------------------------------------------------------------


def resonance_weight(inst: CountingInstance, j: int) -> Fraction:
    """``min(2b, ||2 alpha j / a||^-1)`` as an exact rational."""
    A, _, _, d = inst.poly
    r = (2 * A * j) % d
    dist = min(r, d - r)
    if dist == 0:
        return 2 * inst.b
    return min(2 * inst.b, Fraction(d, dist))


def resonance_weights(inst: CountingInstance, lo: int, hi: int) -> np.ndarray:
    """Float weights for ``lo <= j <= hi``; ``||.||`` decided in integers."""
    if hi < lo:
        return np.zeros(0)
    A, _, _, d = inst.poly
    k = (2 * A) % d
    if d < 2**31 and hi < 2**31:
        r = (k * (np.arange(lo, hi + 1, dtype=np.int64) % d)) % d
    else:
        r = (k * np.arange(lo, hi + 1, dtype=object)) % d
    dist = np.minimum(r, d - r)
    two_b = float(2 * inst.b)
    with np.errstate(divide="ignore"):
        inv = float(d) / dist.astype(np.float64)
    return np.where(dist == 0, two_b, np.minimum(two_b, inv))


def _below(x: Fraction) -> int:
    """Largest integer strictly below ``x``."""
    return -(-x.numerator // x.denominator) - 1


def I1_sum(inst: CountingInstance) -> float:
    """``sum_{1 <= j < b}`` resonance weight."""
    return math.fsum(resonance_weights(inst, 1, _below(inst.b)))


def I2_sum(inst: CountingInstance, H: int) -> float:
    """``sum_{b <= j < bH}`` resonance weight ``/ j``."""
    lo = -(-inst.b.numerator // inst.b.denominator)
    hi = _below(inst.b * H)
    w = resonance_weights(inst, lo, hi)
    return math.fsum(w / np.arange(lo, hi + 1, dtype=np.float64)) if len(w) else 0.0


def I_sum(inst: CountingInstance, H: int) -> float:
    """``sum_{1 <= j < bH}`` resonance weight ``* g(j) / j``."""
    hi = _below(inst.b * H)
    if hi < 1:
        return 0.0
    g = g_table(hi, inst.b)[1:]
    w = resonance_weights(inst, 1, hi)
    return math.fsum(w * g / np.arange(1, hi + 1, dtype=np.float64))


def I_split(inst: CountingInstance, H: int) -> tuple[float, float]:
    """The two halves of :func:`I_sum`: ``sigma(j)`` weights below ``b``, ``g(j)`` above."""
    lo_hi = _below(inst.b)
    hi = _below(inst.b * H)
    _, s = divisor_tables(max(lo_hi, 0))
    w1 = resonance_weights(inst, 1, lo_hi)
    first = math.fsum(w1 * s[1:] / np.arange(1, lo_hi + 1, dtype=np.float64)) if lo_hi >= 1 else 0.0
    lo2 = lo_hi + 1
    if hi < lo2:
        return first, 0.0
    g = g_table(hi, inst.b)[lo2:]
    w2 = resonance_weights(inst, lo2, hi)
    return first, math.fsum(w2 * g / np.arange(lo2, hi + 1, dtype=np.float64))


def I_envelope(inst: CountingInstance, H: int, epsilon: float = 0.05) -> float:
    """``(log log b) I1 + b f(bH) I2`` with both logarithmic factors floored.

    ``log log b`` is replaced by ``max(log log b, 1)`` and ``f`` is evaluated
    at ``max(bH, 3)`` so the expression stays positive for small ``b``.
    """
    b = float(inst.b)
    ll = math.log(math.log(b)) if b > math.e else 0.0
    return max(ll, 1.0) * I1_sum(inst) + b * divisor_envelope_f(max(b * H, 3.0), epsilon) * I2_sum(inst, H)


def I1_envelope(inst: CountingInstance) -> float:
    """``(a^2 + b^2) / a * log a``."""
    a, b = float(inst.a), float(inst.b)
    return (a * a + b * b) / a * math.log(a)


def I2_envelope(inst: CountingInstance, H: int) -> float:
    """``(a^2 + b^2) / (ab) * log(bH/a + 2) * log a``."""
    a, b = float(inst.a), float(inst.b)
    return (a * a + b * b) / (a * b) * math.log(b * H / a + 2) * math.log(a)


def secondsum_bound(inst: CountingInstance, H: int) -> float:
    """``sum_h (1/h) (b + sum_{1 <= l < b} min(2b, ||2 alpha h l / a||^-1))``.

    Dominates ``sum_h |S(h)|^2 / h`` term by term after Weyl differencing.
    """
    b = float(inst.b)
    top = _below(inst.b)
    return math.fsum((b + math.fsum(_weights_scaled(inst, h, top))) / h for h in range(1, H + 1))


def _weights_scaled(inst: CountingInstance, h: int, top: int) -> np.ndarray:
    if top < 1:
        return np.zeros(0)
    A, _, _, d = inst.poly
    l = np.arange(1, top + 1, dtype=object if d >= 2**31 else np.int64)
    r = ((2 * A * h) % d) * (l % d) % d
    dist = np.minimum(r, d - r).astype(np.float64)
    two_b = float(2 * inst.b)
    with np.errstate(divide="ignore"):
        inv = float(d) / dist
    return np.where(dist == 0, two_b, np.minimum(two_b, inv))


def double_min_sum(inst: CountingInstance, H: int) -> Fraction:
    """``sum_{h <= H} (1/h) sum_{1 <= l < b} w(hl)``, exactly."""
    top = _below(inst.b)
    return sum(
        (resonance_weight(inst, h * l) / h for h in range(1, H + 1) for l in range(1, top + 1)),
        Fraction(0),
    )


def regrouped_min_sum(inst: CountingInstance, H: int) -> Fraction:
    """The same double sum regrouped by ``j = hl``: divisors ``h <= H`` with ``j/h < b``."""
    total = Fraction(0)
    for j in range(1, _below(inst.b * H) + 1):
        weight = sum(
            (Fraction(1, h) for h in range(1, min(H, j) + 1) if j % h == 0 and j // h < inst.b),
            Fraction(0),
        )
        if weight:
            total += resonance_weight(inst, j) * weight
    return total


# -- envelopes -------------------------------------------------------------------


def _loglog_ratio(x: float) -> float:
    """``log x / log log x``."""
    lx = math.log(x)
    return lx / math.log(lx)


def theorem1_envelope(inst: CountingInstance, p: EnvelopeParams = EnvelopeParams()) -> float:
    """``C (sqrt(a) + b / sqrt(a)) exp((ln2/2 + eps) log D / log log D)``, ``D = max(b^2 sqrt(a)/(a+b), 3)``."""
    a, b = float(inst.a), float(inst.b)
    sa = math.sqrt(a)
    return p.C * (sa + b / sa) * math.exp((LN2 / 2 + p.epsilon) * _loglog_ratio(inst.delta_cap))


def _check_a(a: float) -> float:
    a = float(a)
    if a < 16:
        raise ValueError("envelopes need a >= 16")
    return a


def popov_envelope(a, p: EnvelopeParams = EnvelopeParams()) -> float:
    a = _check_a(a)
    return p.C * math.sqrt(a) * math.exp((0.75 * LN2 + p.epsilon) * _loglog_ratio(a))


def huangli_envelope(a, b, p: EnvelopeParams = EnvelopeParams()) -> float:
    a, b = _check_a(a), float(b)
    la = math.log(a)
    return p.C * (math.sqrt(a) * la + b / math.sqrt(a) * math.exp((2 + p.epsilon) * math.sqrt(la) / math.log(la)))


def chamizo_pastor_floor(a, p: EnvelopeParams = EnvelopeParams()) -> float:
    """Lower-bound shape ``C sqrt(a) exp((sqrt2 - eps) sqrt(log a) / log log a)``."""
    a = _check_a(a)
    if p.epsilon >= math.sqrt(2):
        raise ValueError("need epsilon < sqrt(2)")
    la = math.log(a)
    return p.C * math.sqrt(a) * math.exp((math.sqrt(2) - p.epsilon) * math.sqrt(la) / math.log(la))


def envelope_crossover(lo: int = 16, hi: int = 10**12, epsilon: float = 0.05) -> int | None:
    """Smallest integer ``a`` in ``[lo, hi]`` past which Huang-Li < Popov at ``b = a``.

    Scans geometrically for the last sign change of ``popov - huangli`` then
    bisects; returns ``None`` if Huang-Li never drops below Popov in range.
    """
    p = EnvelopeParams(epsilon)

    def better(a: int) -> bool:
        return huangli_envelope(a, a, p) < popov_envelope(a, p)

    grid = sorted({int(round(lo * (hi / lo) ** (k / 4000))) for k in range(4001)})
    last_bad = None
    for a in grid:
        if not better(a):
            last_bad = a
    if last_bad is None:
        return lo
    if last_bad >= grid[-1]:
        return None
    nxt = next(a for a in grid if a > last_bad)
    left, right = last_bad, nxt
    while right - left > 1:
        mid = (left + right) // 2
        if better(mid):
            right = mid
        else:
            left = mid
    return right
