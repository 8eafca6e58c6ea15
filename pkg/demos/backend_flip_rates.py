"""
Flip rates of the annealer backends
===================================

A lone spin with bias h is started in its preferred state and put through a
reverse anneal. The thermal surrogate flips less as |h| grows. The exact
evolution is coherent, so at a single schedule it oscillates with |h|.
"""

import numpy as np

from gqaa.anneal import (
    CLASSICAL_LIMIT,
    QUANTUM_EXACT,
    THERMAL,
    BackendParams,
    calibrate_mutation,
    reverse_schedule,
    sample,
)
from gqaa.ising import IsingProblem

schedule = reverse_schedule(0.74)
reads = 5000
# temperature scale chosen so |h| = 0.15 flips 5% of the time at s = 0.74
t0 = calibrate_mutation(0.05, 0.15) / (1 - 0.74)

print(" |h|   classical  thermal  quantum")
for hm in (0.05, 0.1, 0.15, 0.3):
    problem = IsingProblem([-hm])
    row = []
    for variant in (CLASSICAL_LIMIT, THERMAL, QUANTUM_EXACT):
        params = BackendParams(variant, flip_rate=0.05, t0=t0, seed=1)
        out = sample(problem, [1], schedule, reads, params)
        row.append(np.mean(out[:, 0] == -1))
    print(f"{hm:5.2f}  " + "  ".join(f"{r:8.4f}" for r in row))

# The classical limit ignores h by design.
