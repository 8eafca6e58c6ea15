"""Self-describing JSON export of an anneal job for external hardware.

Layout::

    {"format_version": 1, "n_spins": n, "h": [...], "J": [[i, j, v], ...],
     "init": [...], "schedule": [[t_us, s], ...], "mode": "reverse",
     "autoscale": false}

Reals are written with 17 significant digits so they read back bit-exactly.
``autoscale`` is always false: rescaling h would lock the spins to their
initial state.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np

from ..ising import IsingProblem, as_spins
from .schedule import AnnealSchedule

FORMAT_VERSION = 1


class ExportError(OSError):
    pass


def _real(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x}")
    text = format(x, ".17g")
    if "e" not in text and "." not in text and "n" not in text:
        text += ".0"
    return text


def _array(items) -> str:
    return "[" + ", ".join(items) + "]"


def dumps_ising(problem: IsingProblem, init, schedule: AnnealSchedule) -> str:
    init = [] if init is None else as_spins(init, problem.n_spins).tolist()
    couplings = [
        _array([str(i), str(j), _real(v)]) for (i, j), v in sorted(problem.J.items())
    ]
    fields = [
        ("format_version", str(FORMAT_VERSION)),
        ("n_spins", str(problem.n_spins)),
        ("h", _array(_real(v) for v in problem.h)),
        ("J", _array(couplings)),
        ("init", _array(str(int(v)) for v in init)),
        ("schedule", _array(_array([_real(t), _real(s)]) for t, s in schedule.vertices)),
        ("mode", json.dumps(schedule.mode)),
        ("autoscale", "false"),
    ]
    body = ",\n".join(f'  "{k}": {v}' for k, v in fields)
    return "{\n" + body + "\n}\n"


def export_ising(problem: IsingProblem, init, schedule: AnnealSchedule, path) -> Path:
    path = Path(path)
    try:
        path.write_text(dumps_ising(problem, init, schedule))
    except OSError as exc:
        raise ExportError(f"failed to write Ising export to {os.fspath(path)}: {exc}") from exc
    return path


def loads_ising(text: str) -> tuple[IsingProblem, np.ndarray | None, AnnealSchedule]:
    doc = json.loads(text)
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported format_version {doc.get('format_version')!r}")
    h = np.array(doc["h"], dtype=float)
    if h.size != doc["n_spins"]:
        raise ValueError("n_spins does not match the length of h")
    couplings = {(int(i), int(j)): float(v) for i, j, v in doc["J"]}
    problem = IsingProblem(h, couplings)
    init = np.array(doc["init"], dtype=np.int8) if doc["init"] else None
    schedule = AnnealSchedule(tuple(tuple(v) for v in doc["schedule"]), doc["mode"])
    return problem, init, schedule


def import_ising(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ExportError(f"failed to read Ising export {os.fspath(path)}: {exc}") from exc
    return loads_ising(text)
