"""The annealer sampling contract and its dispatch over backend variants."""

from __future__ import annotations

import numpy as np

from ..ising import IsingProblem
from .params import CLASSICAL_LIMIT, QUANTUM_EXACT, THERMAL, BackendError, BackendParams
from .quantum import evolve_quantum_exact
from .schedule import FORWARD, REVERSE, AnnealSchedule
from .thermal import sample_thermal


def sample_classical_limit(init, reads: int, flip_rate: float, rng) -> np.ndarray:
    """Flip every spin of ``init`` independently with ``flip_rate``; ignores ``J``."""
    init = np.asarray(init, dtype=np.int8)
    flips = rng.random((reads, init.size)) < flip_rate
    return np.where(flips, -init, init).astype(np.int8)


def sample(
    problem: IsingProblem,
    init,
    schedule: AnnealSchedule,
    reads: int,
    params: BackendParams,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Return ``reads`` configurations as a ``(reads, n_spins)`` int8 array.

    Randomness comes from ``rng`` when given, otherwise from ``params.seed``.
    """
    if reads < 1:
        raise BackendError("reads must be at least 1")
    if rng is None:
        rng = np.random.default_rng(params.seed)
    n = problem.n_spins
    if init is None:
        if schedule.mode == REVERSE:
            raise BackendError("reverse annealing needs an initial configuration")
        if params.variant == THERMAL:
            init = rng.choice(np.array([-1, 1], dtype=np.int8), size=n)
    else:
        init = np.asarray(init, dtype=np.int8)
        if init.size != n:
            raise BackendError(f"init has {init.size} spins, problem has {n}")

    if params.variant == CLASSICAL_LIMIT:
        if schedule.mode == FORWARD:
            raise BackendError("classical-limit backend only supports reverse reads")
        return sample_classical_limit(init, reads, params.flip_rate, rng)
    if params.variant == THERMAL:
        return sample_thermal(problem, init, schedule, reads, params, rng)
    if params.variant == QUANTUM_EXACT:
        outcome = evolve_quantum_exact(problem, init, schedule, params.step, params.tol)
        return outcome.sample(reads, rng)
    raise BackendError(f"unknown backend variant {params.variant!r}")
