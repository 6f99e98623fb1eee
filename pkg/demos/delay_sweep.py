"""
Sweeping the delay target: learned policy vs baselines
======================================================

Runs the sweep driver across a range of deadlines, training the
decision-assisted Sarsa variant at each point and evaluating it next to
the max-link and random baselines. Medians across seeds land in one
aggregated CSV under sweep_demo/.

Each trained point costs a full training run, so the grid and seed count
here are kept small; scale VALUES, N_SEEDS, and the rounds setting up for
a publication-grade sweep.
"""

from relaysel.harness import read_sweep_csv, resolve_settings, run_sweep

VALUES = (2, 6, 10)
N_SEEDS = 3

settings = resolve_settings({"preset": "inid_default", "algorithm": "sarsa",
                             "assist": "decision", "rounds": 10})
path = run_sweep("delay", VALUES, settings, "sweep_demo",
                 policies=["sarsa-decision", "max-link", "random"],
                 n_seeds=N_SEEDS, eval_slots=20_000)

axis, policies, rows = read_sweep_csv(path)
print(f"wrote {path}")
print(f"\n{axis:>8}  " + "  ".join(f"{p:>15}" for p in policies))
for value, *medians in rows:
    print(f"{value:>8.0f}  " + "  ".join(f"{m:>15.4f}" for m in medians))
