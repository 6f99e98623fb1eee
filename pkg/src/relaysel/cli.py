"""Command-line front end: ``train``, ``eval``, and ``sweep`` subcommands."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness


def _add_common(parser: argparse.ArgumentParser) -> None:
    # Everything defaults to None so only flags the user actually set
    # override the config file.
    parser.add_argument("--preset", choices=("iid_default", "inid_default"))
    parser.add_argument("--relays", type=int, metavar="K")
    parser.add_argument("--buffer", type=int, metavar="L")
    parser.add_argument("--eta", type=float, help="target data rate, bps/Hz")
    parser.add_argument("--delay", type=int, help="target delay budget, slots")
    parser.add_argument("--algorithm", choices=("q", "sarsa"))
    parser.add_argument("--assist", choices=("decision", "punish"))
    parser.add_argument("--seed", type=int)
    parser.add_argument("--rounds", type=int, help="outer rounds (target syncs)")
    parser.add_argument("--out", metavar="PATH", help="output directory")
    parser.add_argument("--config", metavar="PATH", help="key=value settings file")
    parser.add_argument("--power-db", type=float, dest="power_db")
    parser.add_argument("--alpha", type=float, help="path loss exponent")
    parser.add_argument("--discount", type=float)
    parser.add_argument("--epsilon-decay", type=float, dest="epsilon_decay")
    parser.add_argument("--epsilon-min", type=float, dest="epsilon_min")
    parser.add_argument("--learning-rate", type=float, dest="learning_rate")
    parser.add_argument("--phase-size", type=int, dest="phase_size")
    parser.add_argument("--batch-size", type=int, dest="batch_size")
    parser.add_argument("--updates-per-sync", type=int, dest="updates_per_sync")
    parser.add_argument("--hidden", help="comma-separated hidden layer sizes")
    parser.add_argument("--eval-slots", type=int, dest="eval_slots")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaysel",
        description="Train and evaluate relay-selection policies for a "
                    "two-hop buffered relay network.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train one algorithm variant")
    _add_common(p_train)

    p_eval = sub.add_parser("eval", help="measure a policy's throughput")
    p_eval.add_argument("policy",
                        help="checkpoint path, 'max-link', or 'random'")
    p_eval.add_argument("--slots", type=int, default=100_000,
                        help="evaluation length in time slots")
    _add_common(p_eval)

    p_sweep = sub.add_parser("sweep", help="sweep one axis across seeds")
    p_sweep.add_argument("--axis", required=True,
                         choices=sorted(harness.SWEEP_AXES))
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated axis values")
    p_sweep.add_argument("--policies",
                         help="comma-separated policy labels "
                              "(q-decision, sarsa-punish, max-link, random)")
    p_sweep.add_argument("--slots", type=int, default=100_000)
    p_sweep.add_argument("--sweep-seeds", type=int, default=3,
                         dest="sweep_seeds", metavar="N",
                         help="seeds per point, medianed")
    _add_common(p_sweep)
    return parser


def _settings_from_args(args: argparse.Namespace) -> dict:
    file_values = harness.parse_config_file(args.config) if args.config else None
    cli_values = {key: getattr(args, key) for key in harness.DEFAULTS
                  if getattr(args, key, None) is not None}
    return harness.resolve_settings(file_values, cli_values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = _settings_from_args(args)
        if args.command == "train":
            out = args.out or f"runs/{settings['algorithm']}-{settings['assist']}-seed{settings['seed']}"
            _, metrics, csv_path, ckpt_path = harness.run_train(settings, out)
            last = metrics[-1].throughput if metrics else float("nan")
            print(f"wrote {csv_path} and {ckpt_path} "
                  f"(final throughput {last:.4f})")
        elif args.command == "eval":
            throughput = harness.run_eval(args.policy, settings, args.slots,
                                          out_dir=args.out)
            print(f"policy={args.policy} slots={args.slots} "
                  f"throughput={throughput:.6f}")
        else:
            values = [v.strip() for v in args.values.split(",") if v.strip()]
            policies = None
            if args.policies:
                policies = [p.strip() for p in args.policies.split(",") if p.strip()]
            path = harness.run_sweep(args.axis, values, settings,
                                     args.out or "sweep",
                                     policies=policies,
                                     n_seeds=args.sweep_seeds,
                                     eval_slots=args.slots)
            print(f"wrote {path}")
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
