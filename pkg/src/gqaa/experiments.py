"""Batch trials, aggregate statistics and CSV / JSON emission.

Per-trial seeds are derived from ``(seed, trial)`` through
``numpy.random.SeedSequence([seed, trial])``, so no two trials share a stream
and a trial's outcome does not depend on how many workers ran the batch.
Trials that exhaust ``call_cap`` count as failures with
``call_count = call_cap``, and enter ``mean_all`` / ``rmsd`` with that value.
"""

from __future__ import annotations

import copy
import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .anneal import AnnealSchedule, BackendParams, calibrate_mutation, reverse_schedule
from .ga import GaParams, run_classical_ga, run_gqaa
from .problems import (
    DEFAULT_PENALTY,
    ProblemSpec,
    TaxicabSpec,
    function_problem,
    taxicab_problem,
)
from .topology import PolyandryConfig

log = logging.getLogger(__name__)

TRIAL_COLUMNS = ("trial", "seed", "solved", "call_count", "generations", "best_fitness")
ALGORITHMS = ("ga", "gqaa")


class ConfigError(ValueError):
    """Invalid experiment configuration; the message starts with the field path."""


def trial_seed(seed: int, trial: int) -> int:
    """Child seed for one trial of an experiment."""
    state = np.random.SeedSequence([int(seed), int(trial)]).generate_state(1, dtype=np.uint64)
    return int(state[0] >> np.uint64(1))


# ---------------------------------------------------------------------------
# configuration


@dataclass
class ExperimentConfig:
    problem: dict
    algorithm: str = "ga"
    ga: GaParams = field(default_factory=GaParams)
    polyandry: Optional[PolyandryConfig] = None
    backend: BackendParams = field(default_factory=BackendParams)
    schedule: AnnealSchedule = field(default_factory=lambda: reverse_schedule(0.74))
    trials: int = 1
    call_cap: int = 7000
    seed: int = 0
    workers: int = 1
    output_dir: Optional[str] = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm: expected one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.trials < 1:
            raise ConfigError("trials: must be >= 1")
        if self.call_cap < self.ga.P:
            raise ConfigError(f"call_cap: must be >= P ({self.ga.P})")
        if self.workers < 1:
            raise ConfigError("workers: must be >= 1")
        build_problem(self.problem)

    def to_dict(self) -> dict:
        return {
            "problem": dict(self.problem),
            "algorithm": self.algorithm,
            "ga": self.ga.to_dict(),
            "polyandry": None if self.polyandry is None else self.polyandry.to_dict(),
            "backend": self.backend.to_dict(),
            "schedule": {"mode": self.schedule.mode, "vertices": self.schedule.to_list()},
            "trials": self.trials,
            "call_cap": self.call_cap,
            "seed": self.seed,
            "workers": self.workers,
            "output_dir": self.output_dir,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        doc = copy.deepcopy(doc)
        if "preset" in doc:
            base = preset_dict(doc.pop("preset"), **doc.pop("preset_args", {}))
            doc = _merge(base, doc)
        if "problem" not in doc:
            raise ConfigError("problem: missing")
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"{sorted(unknown)[0]}: unknown field")
        kwargs: dict[str, Any] = {"problem": doc["problem"]}
        for key in ("algorithm", "trials", "call_cap", "seed", "workers", "output_dir"):
            if key in doc:
                kwargs[key] = doc[key]
        kwargs["ga"] = _section(GaParams, doc.get("ga", {}), "ga")
        if doc.get("polyandry") is not None:
            kwargs["polyandry"] = _section(PolyandryConfig, doc["polyandry"], "polyandry")
        kwargs["backend"] = _section(BackendParams, doc.get("backend", {}), "backend")
        if "schedule" in doc:
            sched = doc["schedule"]
            try:
                kwargs["schedule"] = AnnealSchedule(
                    tuple(tuple(v) for v in sched["vertices"]), sched.get("mode", "reverse")
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"schedule: {exc}") from exc
        try:
            return cls(**kwargs)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"config: {exc}") from exc


def _section(kind, values: dict, path: str):
    names = {f.name for f in fields(kind)}
    for key in values:
        if key not in names:
            raise ConfigError(f"{path}.{key}: unknown field")
    try:
        return kind(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def load_config(path) -> ExperimentConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return ExperimentConfig.from_dict(doc)


def build_problem(doc: dict) -> ProblemSpec:
    name = doc.get("name")
    try:
        if name == "function":
            return function_problem(float(doc.get("kappa", 1.0)), doc.get("threshold"))
        if name == "taxicab":
            spec = TaxicabSpec(
                k=int(doc.get("k", 3)),
                n=int(doc.get("n", 6)),
                m=int(doc.get("m", 6)),
                bits_per_integer=int(doc.get("bits_per_integer", 5)),
                value_offset=int(doc.get("value_offset", 0)),
            )
            return taxicab_problem(spec, float(doc.get("penalty_weight", DEFAULT_PENALTY)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"problem: {exc}") from exc
    raise ConfigError(f"problem.name: unknown problem {name!r}")


# ---------------------------------------------------------------------------
# presets


def table1() -> dict:
    text = resources.files("gqaa").joinpath("data/table1.json").read_text()
    return json.loads(text)


def preset_dict(name: str, algorithm: str = "gqaa", kappa: float = 1.0, n: int = 6, **extra) -> dict:
    """Plain-dict experiment config built from the bundled parameter table.

    ``name`` is ``"function"`` (with ``kappa``) or ``"diophantine"`` (a
    ``(3, n, n)`` Taxicab search). The enhanced coupling is
    ``-alpha * alpha_p`` and the surrogate temperature scale is calibrated so
    that the fittest individual flips at ``target_rate`` at ``reference_s_q``.
    A preset may override any of the shared ``surrogate`` entries.
    """
    table = table1()
    if name not in ("function", "diophantine"):
        raise ConfigError(f"preset: unknown preset {name!r}")
    entry = table[name]
    key = f"{kappa:g}" if name == "function" else str(int(n))
    if key not in entry["s_q"]:
        raise ConfigError(f"preset: no s_q listed for {name} {key}")
    problem = dict(entry["problem"])
    if name == "function":
        problem["kappa"] = float(kappa)
    else:
        problem["n"] = problem["m"] = int(n)
    ga = dict(entry["ga"])
    poly = dict(entry["polyandry"])
    poly["kappa"] = -ga["alpha"] * ga["alpha_p"]
    sur = {**table["surrogate"], **entry.get("surrogate", {})}
    h_top = ga["alpha"] * ga["alpha_p"]
    t_q = calibrate_mutation(sur["target_rate"], h_top)
    backend = {
        "variant": "thermal-surrogate",
        "t0": t_q / (1.0 - sur["reference_s_q"]),
        "freeze_s": sur["freeze_s"],
        "sweeps_per_time": sur["sweeps_per_time"],
    }
    sched = table["schedule"]
    schedule = reverse_schedule(entry["s_q"][key], sched["ramp_us"], sched["hold_us"])
    doc = {
        "problem": problem,
        "algorithm": algorithm,
        "ga": ga,
        "polyandry": poly,
        "backend": backend,
        "schedule": {"mode": schedule.mode, "vertices": schedule.to_list()},
        "trials": entry["trials"],
        "call_cap": entry["call_cap"][key],
        "seed": 0,
    }
    return _merge(doc, extra)


def preset_config(name: str, algorithm: str = "gqaa", kappa: float = 1.0, n: int = 6, **extra) -> ExperimentConfig:
    return ExperimentConfig.from_dict(preset_dict(name, algorithm, kappa, n, **extra))


# ---------------------------------------------------------------------------
# statistics


@dataclass
class TrialRecord:
    trial: int
    seed: int
    solved: bool
    call_count: int
    generations: int
    best_fitness: float
    trace: list[float] = field(default_factory=list)


@dataclass
class TrialStats:
    records: list[TrialRecord]
    call_cap: int

    @property
    def call_counts(self) -> np.ndarray:
        return np.array([r.call_count for r in self.records], dtype=float)

    @property
    def solved(self) -> np.ndarray:
        return np.array([r.solved for r in self.records], dtype=bool)

    @property
    def mean_all(self) -> float:
        return float(self.call_counts.mean()) if self.records else math.nan

    @property
    def mean_solved(self) -> float:
        c = self.call_counts[self.solved]
        return float(c.mean()) if c.size else math.nan

    @property
    def rmsd(self) -> float:
        """Root-mean-square deviation of all emitted call counts about their mean."""
        c = self.call_counts
        return float(np.sqrt(np.mean((c - c.mean()) ** 2))) if c.size else math.nan

    @property
    def failure_rate(self) -> float:
        return float(1.0 - self.solved.mean()) if self.records else math.nan

    def summary(self) -> list[tuple[str, float]]:
        return [
            ("mean", self.mean_all),
            ("mean_all", self.mean_all),
            ("mean_solved", self.mean_solved),
            ("rmsd", self.rmsd),
            ("failure_rate", self.failure_rate),
            ("trials", len(self.records)),
            ("call_cap", self.call_cap),
        ]

    def to_dict(self) -> dict:
        return {
            "call_cap": self.call_cap,
            "capped_trials_count_as": "call_cap",
            "summary": dict(self.summary()),
            "records": [
                {
                    "trial": r.trial,
                    "seed": r.seed,
                    "solved": r.solved,
                    "call_count": r.call_count,
                    "generations": r.generations,
                    "best_fitness": r.best_fitness,
                    "trace": list(r.trace),
                }
                for r in self.records
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TrialStats":
        records = [
            TrialRecord(
                trial=int(r["trial"]),
                seed=int(r["seed"]),
                solved=bool(r["solved"]),
                call_count=int(r["call_count"]),
                generations=int(r["generations"]),
                best_fitness=float(r["best_fitness"]),
                trace=[float(v) for v in r.get("trace", [])],
            )
            for r in doc["records"]
        ]
        return cls(records, int(doc["call_cap"]))

    def __eq__(self, other):
        if not isinstance(other, TrialStats):
            return NotImplemented
        return self.to_dict() == other.to_dict()


# ---------------------------------------------------------------------------
# running


def run_trial(cfg: ExperimentConfig, trial: int, generations: int | None = None) -> TrialRecord:
    """One independent run. With ``generations`` set, runs exactly that many
    breeding steps after the initial population and ignores ``call_cap``."""
    problem = build_problem(cfg.problem)
    seed = trial_seed(cfg.seed, trial)
    if generations is None:
        params = replace(cfg.ga, seed=seed)
        cap = cfg.call_cap
    else:
        params = replace(cfg.ga, seed=seed, max_generations=generations + 1)
        cap = None
    if cfg.algorithm == "ga":
        result = run_classical_ga(problem, params, call_cap=cap)
    else:
        backend = replace(cfg.backend, seed=seed)
        result = run_gqaa(problem, params, cfg.polyandry, backend, cfg.schedule, call_cap=cap)
    call_count = result.call_count if result.solved else max(result.call_count, cfg.call_cap)
    if generations is not None:
        call_count = result.call_count
    return TrialRecord(
        trial=trial,
        seed=seed,
        solved=result.solved,
        call_count=int(call_count),
        generations=result.generations_used,
        best_fitness=float(max(result.best_fitness_per_generation)),
        trace=[float(v) for v in result.best_fitness_per_generation],
    )


def _trial_job(args):
    doc, trial, generations = args
    return run_trial(ExperimentConfig.from_dict(doc), trial, generations)


def _run_trials(cfg: ExperimentConfig, generations: int | None = None) -> list[TrialRecord]:
    jobs = [(cfg.to_dict(), t, generations) for t in range(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_trial_job, jobs))
    else:
        records = []
        for job in jobs:
            records.append(_trial_job(job))
            if (job[1] + 1) % 10 == 0:
                log.info("%s: %d/%d trials", cfg.algorithm, job[1] + 1, cfg.trials)
    return sorted(records, key=lambda r: r.trial)


def run_experiment(cfg: ExperimentConfig, out_dir=None) -> TrialStats:
    """Run ``cfg.trials`` independent trials; optionally write ``trials.csv``,
    ``summary.csv`` and ``stats.json`` to ``out_dir``."""
    stats = TrialStats(_run_trials(cfg), cfg.call_cap)
    out_dir = out_dir if out_dir is not None else cfg.output_dir
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        emit_results(stats, "csv", out / "trials.csv")
        (out / "summary.csv").write_text(summary_csv(stats))
        emit_results(stats, "json", out / "stats.json")
    return stats


def mutation_rate_sweep(cfg: ExperimentConfig, rates, out_path=None) -> list[dict]:
    """Classical-GA call-count statistics at each mutation rate."""
    rates = list(rates)
    if not rates:
        raise ConfigError("rates: empty rate list")
    if cfg.algorithm != "ga":
        raise ConfigError("algorithm: mutation-rate sweeps need algorithm 'ga'")
    rows = []
    for rate in rates:
        sub = replace(cfg, ga=replace(cfg.ga, mutation_rate=float(rate)))
        stats = run_experiment(sub, out_dir=None)
        rows.append(
            {
                "rate": float(rate),
                "mean_all": stats.mean_all,
                "mean_solved": stats.mean_solved,
                "rmsd": stats.rmsd,
                "failure_rate": stats.failure_rate,
                "trials": len(stats.records),
            }
        )
        log.info("rate %g: mean %.1f", rate, stats.mean_all)
    if out_path is not None:
        Path(out_path).write_text(_rows_csv(rows))
    return rows


def fitness_trace_experiment(cfg: ExperimentConfig, generations: int, out_path=None) -> dict[str, np.ndarray]:
    """Mean best fitness at generations ``0..generations`` for GA and GQAA.

    Generation 0 is the random initial population. Trials that solve early
    keep their best fitness for the remaining generations.
    """
    if generations < 0:
        raise ConfigError("generations: must be >= 0")
    curves = {}
    for algorithm in ALGORITHMS:
        sub = replace(cfg, algorithm=algorithm)
        records = _run_trials(sub, generations)
        traces = np.full((len(records), generations + 1), np.nan)
        for i, rec in enumerate(records):
            best = np.maximum.accumulate(np.asarray(rec.trace[: generations + 1]))
            traces[i, : best.size] = best
            traces[i, best.size:] = best[-1]
        curves[algorithm] = traces.mean(axis=0)
    if out_path is not None:
        rows = [
            {"generation": g, "ga": curves["ga"][g], "gqaa": curves["gqaa"][g]}
            for g in range(generations + 1)
        ]
        Path(out_path).write_text(_rows_csv(rows))
    return curves


# ---------------------------------------------------------------------------
# emission


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _rows_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(rows[0]))
    for row in rows:
        writer.writerow([_fmt(v) for v in row.values()])
    return buf.getvalue()


def trials_csv(stats: TrialStats) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRIAL_COLUMNS)
    for r in stats.records:
        writer.writerow([_fmt(getattr(r, c)) for c in TRIAL_COLUMNS])
    return buf.getvalue()


def summary_csv(stats: TrialStats) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("metric", "value"))
    for name, value in stats.summary():
        writer.writerow((name, _fmt(value)))
    return buf.getvalue()


def emit_results(stats: TrialStats, format: str, path) -> Path:
    """Write per-trial CSV (``format='csv'``) or the full JSON document."""
    path = Path(path)
    if format == "csv":
        text = trials_csv(stats)
    elif format in ("json", "structured-text"):
        text = json.dumps(stats.to_dict(), indent=2) + "\n"
    else:
        raise ValueError(f"unknown format {format!r}")
    path.write_text(text)
    return path


def read_results(path) -> TrialStats:
    return TrialStats.from_dict(json.loads(Path(path).read_text()))
