"""Split a lattice-point count under a dilated parabola into main term and error.

The floor sum is computed term by term, the main term from power-sum closed
forms, and the two always differ by minus the sawtooth sum, exactly.
"""

from fractions import Fraction as F

from parabola_lattice import counting as c

inst = c.instance(F(3, 7), F(-1, 3), 2, F(5, 2) * 40, 300)
A, B, C, D = inst.poly
print(f"f(x) = ({A} x^2 + {B} x + {C}) / {D}, x = 1..{inst.x_max}")

floor_sum = c.floor_sum(inst)
main = c.main_term(inst)
signed, size = c.error_term(inst)
print(f"floor sum      {floor_sum}")
print(f"main term      {main}  (~{float(main):.3f})")
print(f"error E        {signed}  (~{float(signed):.3f})")
print(f"-sum psi(f(x)) {-c.psi_sum(inst)}")
assert signed == -c.psi_sum(inst)

# the error grows far slower than b: here is E(a, a) for the unit parabola
for a in (100, 1000, 10_000, 100_000):
    e = float(c.error_term(c.CountingInstance(c.P0, a, a))[1])
    print(f"a = b = {a:>6}:  |E| = {e:9.3f}   |E|/sqrt(a) = {e / a ** 0.5:.4f}")
