"""Exit criteria, one test per criterion; each prints a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py``; the terminal summary
lists every criterion with its measured value.
"""

import math
import os
import random
import time
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from parabola_lattice import harness as hs
from parabola_lattice.cli import main
from parabola_lattice.counting import (
    P0, CountingInstance, Parabola, error_term, floor_sum, main_term, near_count, psi_sum,
)
from parabola_lattice.divisor_bounds import (
    EnvelopeParams, chamizo_pastor_floor, envelope_crossover, huangli_envelope, popov_envelope,
    theorem1_envelope,
)
from parabola_lattice.expsum import (
    DiscrepancyWindow, discrepancy, erdos_turan_bound, exp_sum, exp_sum_series, identity_holds,
    second_moment_lhs, second_moment_weyl, vaaler_bound, window_count,
)

SEED = 20261018
H_SET = (1, 2, 5, 10, 50)
DELTAS = (F(1, 10), F(1, 4), F(2, 5))


@pytest.fixture(scope="module")
def suite():
    return hs.random_instances(SEED, 1000, a_max=1000, b_max=10_000)


@pytest.fixture(scope="module")
def series(suite):
    return [exp_sum_series(inst, max(H_SET)) for inst in suite]


def test_c1_exact_decomposition(suite, record):
    t0 = time.perf_counter()
    failures = 0
    for inst in suite:
        signed, _ = error_term(inst)
        if floor_sum(inst) != main_term(inst) + signed or signed != -psi_sum(inst):
            failures += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 60
    record("C1", ok, f"{len(suite)} instances, {failures} failures, {elapsed:.1f}s (limit 60s)")
    assert ok


def test_c2_vaaler(suite, series, record):
    violations = 0
    worst = 0.0
    for inst, s in zip(suite, series):
        lhs = float(abs(psi_sum(inst)))
        for H in H_SET:
            bound = vaaler_bound(inst, H, s)
            worst = max(worst, lhs / bound)
            violations += lhs > bound
    record("C2", violations == 0, f"{violations} violations over {len(suite) * len(H_SET)} checks, max lhs/bound {worst:.4f}")
    assert violations == 0


def test_c3_erdos_turan(suite, series, record):
    violations = mismatches = 0
    worst = 0.0
    for inst, s in zip(suite, series):
        bounds = [erdos_turan_bound(inst, H, s) for H in H_SET]
        for delta in DELTAS:
            w = DiscrepancyWindow(-delta, delta)
            disc = float(abs(discrepancy(inst, w)))
            mismatches += window_count(inst, w) != near_count(inst, delta)
            for bound in bounds:
                worst = max(worst, disc / bound)
                violations += disc > bound
    ok = violations == 0 and mismatches == 0
    record("C3", ok, f"{violations} bound violations, {mismatches} Z != near_count, max |D|/bound {worst:.4f}")
    assert ok


def test_c4_second_moment_identity(record):
    insts = hs.random_instances(SEED + 4, 100, a_max=1000, b_max=1000)
    rng = random.Random(SEED + 4)
    worst = 0.0
    bad = 0
    for inst in insts:
        H = rng.randint(1, 20)
        lhs = second_moment_lhs(inst, H)
        weyl, imag = second_moment_weyl(inst, H, return_imag=True)
        worst = max(worst, abs(weyl - lhs) / max(abs(lhs), 1.0))
        bad += not identity_holds(lhs, weyl, imag)
    record("C4", bad == 0, f"{bad}/100 disagree, max relative gap {worst:.2e} (limit 1e-9)")
    assert bad == 0


def _max_ratio(lo, hi, p):
    best = (0.0, None)
    for a in range(lo, hi + 1):
        inst = CountingInstance(P0, a, a)
        best = max(best, (float(error_term(inst)[1]) / theorem1_envelope(inst, p), a))
    return best


def test_c5_theorem1_envelope_trend(record):
    p = EnvelopeParams(0.05)
    c_star, a1 = _max_ratio(16, 2000, p)
    c_next, a2 = _max_ratio(2001, 4000, p)
    ok = math.isfinite(c_star) and c_star > 0 and c_next <= 1.5 * c_star
    record("C5", ok, f"C* = {c_star:.4f} (a={a1}) on 16..2000; max {c_next:.4f} (a={a2}) on 2001..4000; limit {1.5 * c_star:.4f}")
    assert ok


def test_c6a_envelope_crossover(record):
    p = EnvelopeParams(0.05)
    a0 = envelope_crossover(16, 10**12, 0.05)
    ok = a0 is not None and a0 <= 10**6
    if ok:
        rng = random.Random(SEED)
        ok = all(huangli_envelope(a, a, p) < popov_envelope(a, p)
                 for a in [a0, a0 + 1] + [rng.randint(a0, 10**12) for _ in range(5000)])
    record("C6a", ok, f"Huang-Li < Popov for all a >= a0 = {a0} (required a0 <= 10^6)")
    assert ok


def test_c6b_lower_bound_witness(record):
    p = EnvelopeParams(0.05)
    rows = hs.extremal_search(16, 5000, hs.ExperimentSpec(epsilon=0.05))
    sqrt_rows = [r for r in rows if r.quantity == "extremal_sqrt"]
    cp_rows = [r for r in rows if r.quantity == "extremal_cp"]
    beats_cp = sum(r.computed >= r.envelope for r in cp_rows)
    top = sqrt_rows[0]
    a_top = int(top.inst.a)
    assert cp_rows[0].envelope == pytest.approx(chamizo_pastor_floor(a_top, p))
    ok = beats_cp < len(cp_rows) / 2 and top.ratio > 0.3
    record("C6b", ok, f"|E| >= CP floor for {beats_cp}/{len(cp_rows)} a; max |E|/sqrt(a) = {top.ratio:.4f} at a={a_top} (need > 0.3)")
    assert ok


def _quad_oracle(inst, h):
    mpmath.mp.dps = 40
    p = inst.parabola
    total = mpmath.mpc(0)
    for x in range(1, inst.x_max + 1):
        v = h * (p.alpha * x * x / inst.a + p.beta * x + p.gamma * inst.a)
        total += mpmath.expjpi(2 * mpmath.mpf(v.numerator) / v.denominator)
    return complex(total)


def test_c7_phase_exactness(record):
    # large constant term puts h f(x) above 2^60, where a double carries no fractional bits
    inst = CountingInstance(Parabola(1, F(1, 3), 10**9 + F(1, 7)), 10**6 + 3, 10**4)
    h = 10**3
    exact = exp_sum(inst, h)
    direct = exp_sum(inst, h, mode="direct")
    oracle = _quad_oracle(inst, h)
    gap = max(abs(exact.real - direct.real), abs(exact.imag - direct.imag))
    err = max(abs(exact.real - oracle.real), abs(exact.imag - oracle.imag))
    ok = gap > 1e-3 and err < 1e-9
    record("C7", ok, f"exact vs direct gap {gap:.3e} (need > 1e-3); exact vs 40-digit oracle {err:.2e} (need < 1e-9)")
    assert ok


def test_c8a_kernel_speed(record):
    inst = CountingInstance(Parabola(F(-97, 89), F(71, 3), F(-9, 7)), F(99991, 100), 10**6)
    t0 = time.perf_counter()
    floor_sum(inst)
    psi_sum(inst)
    elapsed = time.perf_counter() - t0
    record("C8a", elapsed <= 5, f"floor_sum + psi_sum at b = 10^6 in {elapsed:.2f}s (limit 5s)")
    assert elapsed <= 5


def test_c8b_parallel_speedup(record):
    spec = hs.ExperimentSpec(random_cells=100, random_a_max=1000, random_b_max=1500, seed=SEED)
    t0 = time.perf_counter()
    serial = hs.run_error_grid(spec, threads=1)
    t1 = time.perf_counter()
    parallel = hs.run_error_grid(spec, threads=4)
    t2 = time.perf_counter()
    speedup = (t1 - t0) / (t2 - t1)
    same = hs.to_csv(serial) == hs.to_csv(parallel)
    cpus = len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count()
    ok = same and speedup >= 3
    record("C8b", ok, f"speedup {speedup:.2f}x at 4 workers (need >= 3x) on {cpus} available CPU(s); rows identical: {same}")
    assert same
    assert speedup >= 3


def test_c9_determinism(tmp_path, record):
    cfg = tmp_path / "grid.cfg"
    cfg.write_text("alpha = 3/7\nbeta = -1/3\ngamma = 2\na_grid = 5/2, 17, 120\nb_factor = 3/2\n"
                   "random_cells = 8\nrandom_a_max = 200\nrandom_b_max = 400\n")
    outs = []
    for k in range(2):
        out = tmp_path / f"run{k}.csv"
        main(["error-grid", "--config", str(cfg), "--seed", "123456789", "--out", str(out)])
        outs.append(out.read_bytes())
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    record("C9", ok, f"two runs, {len(outs[0])} bytes each, byte-identical: {outs[0] == outs[1]}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
