"""Walk every intermediate inequality for one instance and print the values."""

import json

from parabola_lattice import harness as hs
from parabola_lattice.counting import P0, CountingInstance

inst = CountingInstance(P0, 1000, 1000)
chain = hs.prove_chain(inst, epsilon=0.05, H=None)
print(json.dumps(chain, indent=2, default=str))
