"""Selection, breeding and the two evolutionary loops (classical GA and GQAA).

Conventions:

* ``ranking`` lists individual indices from fittest to least fit.
* A *rank position* counts the other way: position ``0`` is the least fit
  and ``P-1`` the fittest. Nepotism weights and column couplings are indexed
  by rank position.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from typing import Any, Callable, Optional

import numpy as np

from .anneal import REVERSE, AnnealSchedule, BackendParams, sample
from .ising import classical_genotype
from .problems import ProblemSpec
from .topology import PolyandryConfig, build_column, expand_to_population


class GaError(ValueError):
    pass


@dataclass(frozen=True)
class GaParams:
    """Meta-parameters shared by both loops.

    ``mutation_rate`` only matters for the classical GA; ``nepotism``,
    ``alpha_p`` and ``read_pool`` only for the GQAA. With ``nepotism`` off
    every h-row gets the same magnitude ``alpha_p``.
    """

    P: int = 70
    alpha: float = 3.0
    alpha_p: float = 0.05
    mutation_rate: float = 0.05
    elitism: bool = True
    max_generations: int = 1000
    seed: int = 0
    nepotism: bool = True
    read_pool: int = 1

    def __post_init__(self):
        if self.P < 2 or self.P % 2:
            raise GaError("P must be an even number >= 2")
        if not self.alpha > 1:
            raise GaError("alpha must be > 1")
        if self.alpha_p <= 0:
            raise GaError("alpha_p must be positive")
        if not 0 <= self.mutation_rate <= 1:
            raise GaError("mutation_rate must lie in [0, 1]")
        if self.max_generations < 1:
            raise GaError("max_generations must be >= 1")
        if self.read_pool < 1:
            raise GaError("read_pool must be >= 1")

    def to_dict(self):
        return asdict(self)


@dataclass
class RunResult:
    call_count: int
    generations_used: int
    best_fitness_per_generation: list[float]
    solved: bool
    solution: Optional[Any] = None
    solution_genotype: Optional[np.ndarray] = None

    @property
    def best_fitness(self) -> float:
        return self.best_fitness_per_generation[-1]


# ---------------------------------------------------------------------------
# operators


def selection_probabilities(P: int, alpha: float) -> np.ndarray:
    """Linear ranked selection; entry ``k-1`` is for the ``k``-th fittest.

    ``p_k = 2 / ((1 + alpha) P) * (1 + (P - k) / (P - 1) * (alpha - 1))``
    """
    if P < 2:
        raise GaError("P must be >= 2")
    if not alpha > 1:
        raise GaError("alpha must be > 1")
    k = np.arange(1, P + 1, dtype=float)
    return 2.0 / ((1.0 + alpha) * P) * (1.0 + (P - k) / (P - 1) * (alpha - 1.0))


def rank_population(fitness) -> np.ndarray:
    """Indices from fittest to least fit; ties keep population order."""
    return np.argsort(-np.asarray(fitness, dtype=float), kind="stable")


def rank_positions(ranking) -> np.ndarray:
    """Rank position of every individual (``P-1`` for the fittest)."""
    ranking = np.asarray(ranking)
    P = ranking.size
    pos = np.empty(P, dtype=np.int64)
    pos[ranking] = P - 1 - np.arange(P)
    return pos


def select_pairs(ranking, probs, rng: np.random.Generator) -> np.ndarray:
    """``P/2`` breeding pairs of individual indices, shape ``(P/2, 2)``.

    Pairs are drawn independently; a second parent equal to the first is
    redrawn.
    """
    ranking = np.asarray(ranking)
    P = ranking.size
    n_pairs = P // 2
    first = rng.choice(P, size=n_pairs, p=probs)
    second = rng.choice(P, size=n_pairs, p=probs)
    clash = first == second
    while np.any(clash):
        second[clash] = rng.choice(P, size=int(clash.sum()), p=probs)
        clash = first == second
    return np.stack([ranking[first], ranking[second]], axis=1)


def crossover(parent_a, parent_b, rng: np.random.Generator, cut: int | None = None):
    """Single-point crossover: children swap tails after ``cut`` (1..N-1)."""
    a = np.asarray(parent_a)
    b = np.asarray(parent_b)
    if a.shape != b.shape or a.ndim != 1:
        raise GaError("parents must be 1-D and of equal length")
    N = a.size
    if N < 2:
        raise GaError("crossover needs genotypes of length >= 2")
    if cut is None:
        cut = int(rng.integers(1, N))
    elif not 1 <= cut <= N - 1:
        raise GaError(f"cut must lie in 1..{N - 1}")
    child_a = np.concatenate([a[:cut], b[cut:]])
    child_b = np.concatenate([b[:cut], a[cut:]])
    return child_a, child_b


def crossover_rows(A, B, rng: np.random.Generator) -> np.ndarray:
    """Cross every row pair of ``A`` and ``B``; children interleaved as 2q, 2q+1."""
    A = np.asarray(A)
    B = np.asarray(B)
    n_pairs, N = A.shape
    if N < 2:
        raise GaError("crossover needs genotypes of length >= 2")
    cuts = rng.integers(1, N, size=n_pairs)
    head = np.arange(N)[None, :] < cuts[:, None]
    children = np.empty((2 * n_pairs, N), dtype=A.dtype)
    children[0::2] = np.where(head, A, B)
    children[1::2] = np.where(head, B, A)
    return children


def mutate(genotype, rate: float, rng: np.random.Generator) -> np.ndarray:
    """Flip each spin independently with probability ``rate``."""
    g = np.asarray(genotype)
    flips = rng.random(g.shape) < rate
    return np.where(flips, -g, g).astype(g.dtype)


def nepotism_weights(P: int, alpha: float, alpha_p: float) -> np.ndarray:
    """``|h|`` by rank position: ``alpha_p * ((alpha - 1) / (P - 1) * l + 1)``."""
    if P < 2:
        raise GaError("P must be >= 2")
    pos = np.arange(P, dtype=float)
    return alpha_p * ((alpha - 1.0) / (P - 1) * pos + 1.0)


def build_parent_genotypes(quantum_genotypes, ranking, weights) -> np.ndarray:
    """h-rows ``-sigma * weights[rank position]`` for every individual."""
    qg = np.asarray(quantum_genotypes)
    weights = np.asarray(weights, dtype=float)
    ranking = np.asarray(ranking)
    if qg.ndim != 2 or ranking.size != qg.shape[0] or weights.size != qg.shape[0]:
        raise GaError("quantum-genotypes, ranking and weights disagree in size")
    pos = rank_positions(ranking)
    return -qg.astype(float) * weights[pos][:, None]


def apply_elitism(genotypes, fitness, elite, elite_fitness: float):
    """Overwrite the least-fit genotype with ``elite`` and its known fitness."""
    genotypes = np.array(genotypes, copy=True)
    fitness = np.array(fitness, dtype=float, copy=True)
    worst = int(np.argmin(fitness))
    genotypes[worst] = elite
    fitness[worst] = elite_fitness
    return genotypes, fitness


# ---------------------------------------------------------------------------
# loops


def _random_population(rng, P, N):
    return rng.choice(np.array([-1, 1], dtype=np.int8), size=(P, N))


def _generation_limit(params: GaParams, call_cap: int | None) -> int:
    limit = params.max_generations
    if call_cap is not None:
        limit = min(limit, call_cap // params.P)
    if limit < 1:
        raise GaError("call_cap must allow at least one generation")
    return limit


class _Tracker:
    """Evaluation, solution check, elitism and bookkeeping shared by both loops."""

    def __init__(self, problem: ProblemSpec, params: GaParams):
        self.problem = problem
        self.params = params
        self.calls = 0
        self.generation = 0
        self.trace: list[float] = []
        self.elite = None
        self.elite_fitness = None
        self.solution = None

    def step(self, population):
        fit, solved = self.problem.evaluate(population)
        self.calls += population.shape[0]
        self.generation += 1
        if np.any(solved):
            idx = np.flatnonzero(solved)
            best = int(idx[np.argmax(fit[idx])])
            self.solution = population[best].copy()
            self.trace.append(float(max(fit.max(), self._best_so_far())))
            return population, fit, True
        if self.params.elitism and self.elite is not None:
            population, fit = apply_elitism(population, fit, self.elite, self.elite_fitness)
        best = int(np.argmax(fit))
        self.elite = population[best].copy()
        self.elite_fitness = float(fit[best])
        self.trace.append(float(fit[best]))
        return population, fit, False

    def _best_so_far(self):
        return -np.inf if self.elite_fitness is None else self.elite_fitness

    def result(self, solved: bool) -> RunResult:
        solution = self.problem.decode(self.solution) if solved else None
        return RunResult(
            call_count=self.calls,
            generations_used=self.generation,
            best_fitness_per_generation=self.trace,
            solved=solved,
            solution=solution,
            solution_genotype=self.solution if solved else None,
        )


def run_classical_ga(
    problem: ProblemSpec,
    params: GaParams,
    call_cap: int | None = None,
    initial_population=None,
    stop_on_solution: bool = True,
) -> RunResult:
    """Ranked selection, single-point crossover and bit-flip mutation."""
    rng = np.random.default_rng(params.seed)
    P, N = params.P, problem.genotype_length
    limit = _generation_limit(params, call_cap)
    probs = selection_probabilities(P, params.alpha)
    if initial_population is None:
        pop = _random_population(rng, P, N)
    else:
        pop = np.asarray(initial_population, dtype=np.int8).reshape(P, N).copy()
    tracker = _Tracker(problem, params)
    while True:
        pop, fit, solved = tracker.step(pop)
        if solved and stop_on_solution:
            return tracker.result(True)
        if tracker.generation >= limit:
            return tracker.result(tracker.solution is not None)
        ranking = rank_population(fit)
        pairs = select_pairs(ranking, probs, rng)
        children = crossover_rows(pop[pairs[:, 0]], pop[pairs[:, 1]], rng)
        pop = mutate(children, params.mutation_rate, rng)


def run_gqaa(
    problem: ProblemSpec,
    params: GaParams,
    polyandry: PolyandryConfig | None,
    backend: BackendParams,
    schedule: AnnealSchedule,
    call_cap: int | None = None,
    initial_population=None,
    stop_on_solution: bool = True,
    on_generation: Callable[[dict], None] | None = None,
) -> RunResult:
    """Genetic quantum annealing loop.

    Each generation the ranked quantum-genotypes become nepotism-weighted
    h-rows, which are bred by crossover. The children are placed on rank
    positions by their total inherited ``|h|`` (strongest on ``P-1``), the
    fixed column topology is attached, and a reverse anneal started from the
    children's classical-genotypes produces the next quantum-genotypes.
    """
    if schedule.mode != REVERSE:
        raise GaError("the GQAA loop needs a reverse anneal schedule")
    rng = np.random.default_rng(params.seed)
    P, N = params.P, problem.genotype_length
    limit = _generation_limit(params, call_cap)
    probs = selection_probabilities(P, params.alpha)
    if params.nepotism:
        weights = nepotism_weights(P, params.alpha, params.alpha_p)
    else:
        weights = np.full(P, params.alpha_p)
    column = build_column(P, polyandry)
    template = expand_to_population(column, N, np.zeros((P, N)))
    if initial_population is None:
        qg = _random_population(rng, P, N)
    else:
        qg = np.asarray(initial_population, dtype=np.int8).reshape(P, N).copy()
    tracker = _Tracker(problem, params)
    while True:
        qg, fit, solved = tracker.step(qg)
        if solved and stop_on_solution:
            return tracker.result(True)
        if tracker.generation >= limit:
            return tracker.result(tracker.solution is not None)
        ranking = rank_population(fit)
        parents = build_parent_genotypes(qg, ranking, weights)
        pairs = select_pairs(ranking, probs, rng)
        children = crossover_rows(parents[pairs[:, 0]], parents[pairs[:, 1]], rng)
        order = np.argsort(np.abs(children).sum(axis=1), kind="stable")
        h_matrix = children[order]
        ising = template.with_h(h_matrix.reshape(-1))
        init = classical_genotype(ising.h, rng)
        reads = sample(ising, init, schedule, params.read_pool, backend, rng)
        if params.read_pool == 1:
            qg = reads[0].reshape(P, N)
        else:
            source = (order // 2) % params.read_pool
            qg = reads.reshape(params.read_pool, P, N)[source, np.arange(P)]
        if on_generation is not None:
            on_generation(
                {
                    "generation": tracker.generation,
                    "ranking": ranking,
                    "h_matrix": h_matrix,
                    "problem": ising,
                    "template": template,
                    "next_quantum_genotypes": qg,
                }
            )
