"""Why phases are reduced mod 1 before taking sine and cosine.

With a large constant term, h f(x) exceeds 2^53 and a double cannot hold its
fractional part.  The exact mode reduces h f(x) as a rational first.
"""

from fractions import Fraction as F

from parabola_lattice.counting import CountingInstance, Parabola
from parabola_lattice.expsum import exp_sum

inst = CountingInstance(Parabola(1, F(1, 3), 10**9 + F(1, 7)), 10**6 + 3, 10**4)
for h in (1, 10, 1000):
    exact = exp_sum(inst, h)
    direct = exp_sum(inst, h, mode="direct")
    print(f"h = {h:>4}  exact {exact.real:+11.5f}{exact.imag:+11.5f}i"
          f"   float phase {direct.real:+11.5f}{direct.imag:+11.5f}i   |diff| {abs(exact - direct):.2e}")
