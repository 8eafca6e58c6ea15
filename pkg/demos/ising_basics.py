"""
Ising energies and classical genotypes
======================================

Build a small problem, score a few configurations and compare the sign rule
with an exhaustive search.
"""

import numpy as np

from gqaa.ising import IsingProblem, classical_genotype, energy, ground_state_bruteforce

rng = np.random.default_rng(0)

# Negative couplings are ferromagnetic: aligned neighbours lower the energy.
problem = IsingProblem([0.1, -0.2, 0.05], {(0, 1): 0.07, (1, 2): -0.3})
print(problem)

for sigma in ([1, 1, 1], [-1, 1, 1], [-1, 1, -1]):
    print(sigma, energy(problem, sigma))

# Without couplings the ground state is just sigma = -sign(h).
h = rng.normal(size=8)
print("sign rule :", classical_genotype(h))
print("brute     :", ground_state_bruteforce(IsingProblem(h))[0])

# With couplings the two can disagree.
print("coupled   :", ground_state_bruteforce(problem))
print("sign rule :", classical_genotype(problem.h))
