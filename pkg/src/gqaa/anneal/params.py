"""Backend parameters and the thermal-surrogate temperature model."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Callable, Optional

CLASSICAL_LIMIT = "classical-limit"
THERMAL = "thermal-surrogate"
QUANTUM_EXACT = "quantum-exact"
VARIANTS = (CLASSICAL_LIMIT, THERMAL, QUANTUM_EXACT)


class BackendError(ValueError):
    """Raised when a backend refuses a request."""


def effective_temperature(s, t0: float = 1.0):
    """Default fluctuation model ``T_eff(s) = t0 * (1 - s)``.

    Monotone non-increasing and zero at ``s=1``. Works on scalars and arrays.
    """
    return t0 * (1.0 - s)


def calibrate_mutation(target_rate: float, h_mod: float) -> float:
    """Temperature at which a lone spin with bias ``h_mod`` flips at ``target_rate``.

    Inverts ``1 / (1 + exp(2 h_mod / T)) = target_rate``.
    """
    if not 0.0 < target_rate < 0.5:
        raise BackendError("target_rate must lie in (0, 0.5)")
    if h_mod <= 0:
        raise BackendError("h_mod must be positive")
    return 2.0 * h_mod / math.log((1.0 - target_rate) / target_rate)


def single_spin_flip_probability(h: float, temperature: float) -> float:
    """Gibbs probability that an uncoupled spin sits against its bias."""
    if temperature == 0:
        return 0.0 if h != 0 else 0.5
    return 1.0 / (1.0 + math.exp(2.0 * abs(h) / temperature))


@dataclass(frozen=True)
class BackendParams:
    """Knobs for one annealer backend.

    ``freeze_s`` is the thermal surrogate's freeze-out point: once ``s(t)``
    reaches it no further Metropolis moves are proposed, mimicking the loss
    of dynamics as the transverse field vanishes.
    """

    variant: str = THERMAL
    flip_rate: float = 0.05
    t0: float = 1.0
    sweeps_per_time: float = 1.0
    freeze_s: float = 0.8
    step: float = 0.05
    tol: float = 1e-6
    seed: int = 0
    temperature_map: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise BackendError(f"unknown backend variant {self.variant!r}")
        if not 0.0 <= self.flip_rate <= 1.0:
            raise BackendError("flip_rate must lie in [0, 1]")
        if self.sweeps_per_time <= 0:
            raise BackendError("sweeps_per_time must be positive")
        if self.t0 < 0:
            raise BackendError("t0 must be non-negative")
        if not 0.0 < self.freeze_s <= 1.0:
            raise BackendError("freeze_s must lie in (0, 1]")
        if self.step <= 0:
            raise BackendError("step must be positive")
        if self.temperature_map is not None and self.temperature_map(1.0) != 0:
            raise BackendError("temperature_map(1) must be 0")

    def temperature(self, s):
        if self.temperature_map is not None:
            return self.temperature_map(s)
        return effective_temperature(s, self.t0)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("temperature_map")
        return d
