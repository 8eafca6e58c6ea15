"""Thermal surrogate: single-spin Metropolis following ``T_eff(s(t))``."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from numba import njit

from ..ising import IsingProblem
from .params import BackendParams
from .schedule import AnnealSchedule


@njit(cache=True)
def _metropolis(spins, h, indptr, indices, values, temps, seed):
    # numba keeps its own generator state; seeding here makes each call reproducible
    np.random.seed(seed)
    reads, n = spins.shape
    for r in range(reads):
        for k in range(temps.size):
            temp = temps[k]
            if temp < 0.0:
                continue
            i = np.random.randint(0, n)
            local = h[i]
            for p in range(indptr[i], indptr[i + 1]):
                local += values[p] * spins[r, indices[p]]
            delta = -2.0 * spins[r, i] * local
            if delta < 0.0:
                spins[r, i] = -spins[r, i]
            elif temp > 0.0 and np.random.random() < math.exp(-delta / temp):
                spins[r, i] = -spins[r, i]


@lru_cache(maxsize=32)
def step_temperatures(schedule: AnnealSchedule, n_spins: int, params: BackendParams) -> np.ndarray:
    """Temperature applied at each single-spin proposal; ``-1`` marks frozen steps.

    One sweep is ``n_spins`` proposals and the schedule gets
    ``sweeps_per_time`` sweeps per microsecond. Each proposal sees ``s`` at
    the midpoint of its time slot.
    """
    n_sweeps = max(1, int(round(params.sweeps_per_time * schedule.duration)))
    steps = n_sweeps * n_spins
    t = schedule.t_init + (np.arange(steps) + 0.5) * (schedule.duration / steps)
    s = schedule.s_at(t)
    temps = np.asarray(params.temperature(s), dtype=float)
    temps = np.where(s > params.freeze_s, -1.0, np.maximum(temps, 0.0))
    temps.setflags(write=False)
    return temps


def sample_thermal(
    problem: IsingProblem,
    init: np.ndarray,
    schedule: AnnealSchedule,
    reads: int,
    params: BackendParams,
    rng: np.random.Generator,
) -> np.ndarray:
    n = problem.n_spins
    out = np.repeat(np.asarray(init, dtype=np.int8)[None, :], reads, axis=0)
    if n == 0:
        return out
    temps = step_temperatures(schedule, n, params)
    indptr, indices, values = problem.neighbours()
    h = np.ascontiguousarray(problem.h, dtype=np.float64)
    seed = int(rng.integers(0, 2**32))
    _metropolis(out, h, indptr, indices, values, temps, seed)
    return out
