"""
Reproducible batches
====================

Configs are plain JSON. Per-trial seeds are split from the experiment seed,
so the same file always gives the same CSV bytes.
"""

import json
import tempfile
from pathlib import Path

from gqaa.experiments import load_config, mutation_rate_sweep, preset_dict, run_experiment

doc = preset_dict("function", "ga", kappa=20.0, trials=8, seed=11)
out = Path(tempfile.mkdtemp())
(out / "config.json").write_text(json.dumps(doc, indent=2))

cfg = load_config(out / "config.json")
first = run_experiment(cfg, out / "run1")
second = run_experiment(cfg, out / "run2")
same = (out / "run1" / "trials.csv").read_bytes() == (out / "run2" / "trials.csv").read_bytes()
print("identical CSV:", same)
print((out / "run1" / "summary.csv").read_text())

for row in mutation_rate_sweep(cfg, [0.02, 0.05, 0.1]):
    print(row["rate"], round(row["mean_all"], 1), f"{row['failure_rate']:.0%}")
