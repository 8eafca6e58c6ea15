"""Command line entry point: ``gqaa run|sweep|trace|export-ising|verify|preset``.

Machine-readable results go to standard output, progress to standard error.
``GQAA_SEED`` and ``GQAA_WORKERS`` override the seed and worker count.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .anneal import export_ising
from .experiments import (
    ConfigError,
    ExperimentConfig,
    _rows_csv,
    build_problem,
    fitness_trace_experiment,
    load_config,
    mutation_rate_sweep,
    preset_dict,
    run_experiment,
    summary_csv,
)
from .ga import build_parent_genotypes, nepotism_weights, rank_population
from .ising import classical_genotype
from .problems import verify_taxicab
from .topology import build_column, expand_to_population

log = logging.getLogger("gqaa")


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config)
    seed = getattr(args, "seed", None)
    if seed is None and os.environ.get("GQAA_SEED"):
        seed = int(os.environ["GQAA_SEED"])
    workers = getattr(args, "workers", None)
    if workers is None and os.environ.get("GQAA_WORKERS"):
        workers = int(os.environ["GQAA_WORKERS"])
    changes = {}
    if seed is not None:
        changes["seed"] = seed
    if workers is not None:
        changes["workers"] = workers
    if getattr(args, "trials", None) is not None:
        changes["trials"] = args.trials
    return replace(cfg, **changes) if changes else cfg


def cmd_run(args) -> int:
    cfg = _load(args)
    stats = run_experiment(cfg, out_dir=args.out)
    sys.stdout.write(summary_csv(stats))
    return 0


def cmd_sweep(args) -> int:
    cfg = _load(args)
    rates = [float(r) for r in args.rates.split(",") if r.strip()]
    rows = mutation_rate_sweep(cfg, rates, out_path=args.out)
    sys.stdout.write(_rows_csv(rows))
    return 0


def cmd_trace(args) -> int:
    cfg = _load(args)
    curves = fitness_trace_experiment(cfg, args.generations, out_path=args.out)
    rows = [
        {"generation": g, "ga": curves["ga"][g], "gqaa": curves["gqaa"][g]}
        for g in range(args.generations + 1)
    ]
    sys.stdout.write(_rows_csv(rows))
    return 0


def cmd_export(args) -> int:
    """Export the first-generation population model of a GQAA config."""
    cfg = _load(args)
    problem = build_problem(cfg.problem)
    P, N = cfg.ga.P, problem.genotype_length
    rng = np.random.default_rng(cfg.seed)
    qg = rng.choice(np.array([-1, 1], dtype=np.int8), size=(P, N))
    fitness, _ = problem.evaluate(qg)
    ranking = rank_population(fitness)
    weights = nepotism_weights(P, cfg.ga.alpha, cfg.ga.alpha_p)
    h = build_parent_genotypes(qg, ranking, weights)
    # place rows on rank positions: fittest last
    h = h[ranking[::-1]]
    ising = expand_to_population(build_column(P, cfg.polyandry), N, h)
    export_ising(ising, classical_genotype(ising.h, rng), cfg.schedule, args.out)
    log.info("wrote %d spins, %d couplings to %s", ising.n_spins, len(ising.J), args.out)
    return 0


def parse_solution_line(line: str):
    left, right = line.split("|")
    to_ints = lambda s: [int(v) for v in s.replace(",", " ").split()]
    return to_ints(left.strip().strip("(")), to_ints(right.strip().strip(")"))


def cmd_verify(args) -> int:
    """Check ``a1 a2 ... | b1 b2 ...`` lines; prints ``ok``/``fail`` per line."""
    failures = 0
    for lineno, line in enumerate(Path(args.file).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        a, b = parse_solution_line(line)
        ok = verify_taxicab(a, b, args.k)
        failures += not ok
        sa = sum(v**args.k for v in a)
        sb = sum(v**args.k for v in b)
        print(f"{lineno},{'ok' if ok else 'fail'},{sa},{sb}")
    return 1 if failures else 0


def cmd_preset(args) -> int:
    doc = preset_dict(args.name, args.algorithm, kappa=args.kappa, n=args.n)
    ExperimentConfig.from_dict(doc)
    print(json.dumps(doc, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gqaa", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a batch of trials")
    p.add_argument("--config", required=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="directory for trials.csv, summary.csv, stats.json")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="classical-GA mutation-rate sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--rates", required=True, help="comma-separated rates")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="CSV output file")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("trace", help="mean best fitness per generation, GA vs GQAA")
    p.add_argument("--config", required=True)
    p.add_argument("--generations", type=int, required=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="CSV output file")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("export-ising", help="write the population Ising model for hardware")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("verify", help="verify Taxicab solutions in a file")
    p.add_argument("--file", required=True)
    p.add_argument("-k", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("preset", help="print a config built from the parameter table")
    p.add_argument("name", choices=["function", "diophantine"])
    p.add_argument("--algorithm", choices=["ga", "gqaa"], default="gqaa")
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("-n", type=int, default=6)
    p.set_defaults(func=cmd_preset)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
