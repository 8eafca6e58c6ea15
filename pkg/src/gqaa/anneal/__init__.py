"""Annealer backends: classical-limit, thermal surrogate and exact quantum."""

from .backends import sample, sample_classical_limit
from .export import dumps_ising, export_ising, import_ising, loads_ising
from .params import (
    CLASSICAL_LIMIT,
    QUANTUM_EXACT,
    THERMAL,
    BackendError,
    BackendParams,
    calibrate_mutation,
    effective_temperature,
    single_spin_flip_probability,
)
from .quantum import QuantumOutcome, evolve_quantum_exact
from .schedule import (
    FORWARD,
    REVERSE,
    AnnealSchedule,
    ScheduleError,
    forward_schedule,
    pinned_schedule,
    reverse_schedule,
)

__all__ = [
    "AnnealSchedule",
    "BackendError",
    "BackendParams",
    "CLASSICAL_LIMIT",
    "FORWARD",
    "QUANTUM_EXACT",
    "QuantumOutcome",
    "REVERSE",
    "ScheduleError",
    "THERMAL",
    "calibrate_mutation",
    "dumps_ising",
    "effective_temperature",
    "evolve_quantum_exact",
    "export_ising",
    "forward_schedule",
    "import_ising",
    "loads_ising",
    "pinned_schedule",
    "reverse_schedule",
    "sample",
    "sample_classical_limit",
    "single_spin_flip_probability",
]
