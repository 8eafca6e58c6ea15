"""Genetic quantum annealing: a GA whose mutation comes from sampling a population Ising model."""
