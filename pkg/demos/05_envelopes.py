"""Compare the published error envelopes and find where they cross.

Constants are all set to 1, so only the shapes are compared.
"""

from parabola_lattice import harness as hs
from parabola_lattice.divisor_bounds import (
    EnvelopeParams, chamizo_pastor_floor, envelope_crossover, huangli_envelope, popov_envelope,
)

p = EnvelopeParams(0.05)
print("        a      Popov    Huang-Li   CP floor")
for a in (10**2, 10**4, 10**6, 10**8, 10**10):
    print(f"{a:>10} {popov_envelope(a, p):10.2f} {huangli_envelope(a, a, p):10.2f} {chamizo_pastor_floor(a, p):10.3f}")
print(f"\nHuang-Li beats Popov from a0 = {envelope_crossover(16, 10**12, 0.05)}")

rows = hs.extremal_search(16, 3000, hs.ExperimentSpec(top_k=5))
print("\nlargest |E(a, a)| / sqrt(a) for 16 <= a <= 3000:")
for r in rows:
    if r.quantity == "extremal_sqrt":
        print(f"  a = {int(r.inst.a):>5}  |E| = {r.computed:8.3f}  ratio {r.ratio:.4f}")
