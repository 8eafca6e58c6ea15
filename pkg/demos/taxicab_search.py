"""
Taxicab numbers
===============

Exhaustive search finds the small cases; the genetic loops go after the
(3, n, n) searches where enumeration is out of reach.
"""

import numpy as np

from gqaa.experiments import fitness_trace_experiment, preset_config
from gqaa.problems import taxicab_bruteforce, verify_taxicab

for total, a, b in taxicab_bruteforce(3, 2, 2, 30)[:4]:
    print(total, a, b)

print(verify_taxicab([13, 9, 8, 6, 8, 8], [10, 2, 10, 11, 2, 11]))
print(taxicab_bruteforce(3, 1, 2, 31))  # no cube is a sum of two cubes

cfg = preset_config("diophantine", "gqaa", n=6, trials=4, seed=3)
curves = fitness_trace_experiment(cfg, 30)
for g in (0, 10, 20, 30):
    print(f"generation {g:3d}  GA {curves['ga'][g]:14.1f}  GQAA {curves['gqaa'][g]:14.1f}")
