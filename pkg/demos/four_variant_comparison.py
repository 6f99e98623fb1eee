"""
Four deep learners on the full ten-relay network
================================================

Trains every combination of update rule (Q-learning vs Sarsa) and
invalid-action handling (decision-assisted masking vs punishment rewards)
on the identical-links scenario and prints each learning curve. Artifacts
land under runs/ as metrics CSVs plus checkpoints, ready for the plotting
package.

Full-scale training is the slow path of this repository: with the default
20 outer rounds each variant takes roughly half a minute of CPU time.
Lower ROUNDS for a quick look.
"""

from relaysel.harness import read_metrics_csv, resolve_settings, run_train

ROUNDS = 20
SEED = 0

for algorithm in ("sarsa", "q"):
    for assist in ("decision", "punish"):
        label = f"{algorithm}-{assist}"
        settings = resolve_settings({"algorithm": algorithm, "assist": assist,
                                     "seed": SEED, "rounds": ROUNDS})
        _, metrics, csv_path, _ = run_train(settings, f"runs/{label}-seed{SEED}")
        curve = " ".join(f"{row.throughput:.2f}" for row in metrics)
        print(f"{label:>15}: {curve}")
        print(f"{'':>15}  wrote {csv_path}")

# the CSV round-trips, so downstream tools can rebuild the curves
settings, rows = read_metrics_csv(f"runs/sarsa-decision-seed{SEED}/metrics.csv")
print(f"\nreloaded sarsa-decision: {len(rows)} rows, "
      f"final throughput {rows[-1].throughput:.3f}, "
      f"trained at eta={settings['eta']}, deadline {settings['delay']}")
