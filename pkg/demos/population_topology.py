"""
Polyandric column graphs
========================

Rank positions are nodes of a column graph. The same graph is repeated for
every allele when the population model is assembled.
"""

import numpy as np

from gqaa.ga import nepotism_weights
from gqaa.topology import PolyandryConfig, build_column, expand_to_population

P, N = 10, 4
cfg = PolyandryConfig(base_j=0.07, rho=0.5, rho_prime=0.2, kappa=-0.15, island_size=5, seed=3)
column = build_column(P, cfg)
for (i, j), v in sorted(column.edges.items()):
    kind = "hub" if v == cfg.kappa else ("repulsive" if v > 0 else "attractive")
    print(f"{i:2d} - {j:2d}  {v:+.2f}  {kind}")

# h rows: least fit on row 0, fittest on row P-1
rng = np.random.default_rng(0)
w = nepotism_weights(P, 3.0, 0.05)
h = -rng.choice([-1, 1], size=(P, N)) * w[:, None]
model = expand_to_population(column, N, h)
print(model)

# every connected component stays inside one allele column
for comp in model.components()[:N]:
    print("component:", comp, "alleles:", sorted(int(a) for a in set(comp % N)))
