"""Piecewise-linear anneal schedules ``s(t)``, times in microseconds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FORWARD = "forward"
REVERSE = "reverse"


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class AnnealSchedule:
    """Vertices ``(t_us, s)`` joined by straight lines.

    Forward schedules start at ``s=0``, reverse ones at ``s=1``; both end at
    ``s=1``.
    """

    vertices: tuple[tuple[float, float], ...]
    mode: str = REVERSE

    def __post_init__(self):
        verts = tuple((float(t), float(s)) for t, s in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if self.mode not in (FORWARD, REVERSE):
            raise ScheduleError(f"unknown mode {self.mode!r}")
        if len(verts) < 2:
            raise ScheduleError("a schedule needs at least two vertices")
        times = np.array([t for t, _ in verts])
        values = np.array([s for _, s in verts])
        if np.any(np.diff(times) <= 0):
            raise ScheduleError("vertex times must be strictly increasing")
        if np.any((values < 0) | (values > 1)):
            raise ScheduleError("s must lie in [0, 1]")
        if values[-1] != 1.0:
            raise ScheduleError("schedule must end at s=1")
        start = 1.0 if self.mode == REVERSE else 0.0
        if values[0] != start:
            raise ScheduleError(f"{self.mode} schedule must start at s={start:g}")

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.vertices])

    @property
    def values(self) -> np.ndarray:
        return np.array([s for _, s in self.vertices])

    @property
    def t_init(self) -> float:
        return self.vertices[0][0]

    @property
    def t_final(self) -> float:
        return self.vertices[-1][0]

    @property
    def duration(self) -> float:
        return self.t_final - self.t_init

    @property
    def s_min(self) -> float:
        return float(self.values.min())

    def s_at(self, t):
        return np.interp(t, self.times, self.values)

    def to_list(self) -> list[list[float]]:
        return [[t, s] for t, s in self.vertices]


def reverse_schedule(s_q: float, ramp: float = 10.0, hold: float = 100.0) -> AnnealSchedule:
    """Reverse anneal 1 -> ``s_q`` over ``ramp``, hold, then back to 1."""
    if not 0.0 <= s_q <= 1.0:
        raise ScheduleError("s_q must lie in [0, 1]")
    if s_q == 1.0:
        return AnnealSchedule(((0.0, 1.0), (2 * ramp + hold, 1.0)), REVERSE)
    return AnnealSchedule(
        ((0.0, 1.0), (ramp, s_q), (ramp + hold, s_q), (2 * ramp + hold, 1.0)),
        REVERSE,
    )


def forward_schedule(duration: float) -> AnnealSchedule:
    return AnnealSchedule(((0.0, 0.0), (float(duration), 1.0)), FORWARD)


def pinned_schedule(duration: float = 1.0) -> AnnealSchedule:
    """Reverse schedule that never leaves ``s=1``."""
    return AnnealSchedule(((0.0, 1.0), (float(duration), 1.0)), REVERSE)
