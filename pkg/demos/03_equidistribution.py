"""Near-integer counts versus the Erdos-Turan and Vaaler inequalities."""

from fractions import Fraction as F

from parabola_lattice.counting import P0, CountingInstance, near_count, near_count_error, psi_sum
from parabola_lattice.expsum import (
    DiscrepancyWindow, discrepancy, erdos_turan_bound, exp_sum_series, vaaler_bound,
)

inst = CountingInstance(P0, 997, 5000)
series = exp_sum_series(inst, 50)

print("delta   Z   Z - 2 delta b   |D|   ET bound (H=10, 50)")
for delta in (F(1, 100), F(1, 10), F(1, 4)):
    w = DiscrepancyWindow(-delta, delta)
    print(f"{str(delta):>5} {near_count(inst, delta):>5} {float(near_count_error(inst, delta)):>10.2f}"
          f" {float(abs(discrepancy(inst, w))):>8.2f}"
          f" {erdos_turan_bound(inst, 10, series):>9.1f} {erdos_turan_bound(inst, 50, series):>7.1f}")

print(f"\n|sum psi| = {float(abs(psi_sum(inst))):.2f}")
for H in (1, 5, 50):
    print(f"Vaaler bound, H = {H:>2}: {vaaler_bound(inst, H, series):.2f}")
