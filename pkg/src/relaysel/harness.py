"""Experiment drivers: named scenarios, config resolution, CSV logs, sweeps.

Settings travel as a flat dict whose keys mirror the CLI flags. Resolution
order is defaults, then config file, then explicit CLI values. The resolved
settings are echoed as ``# key=value`` comments at the top of every metrics
CSV so a run can be reproduced from its output alone.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from statistics import median

import numpy as np

from .agents import Metrics, TrainConfig, greedy_policy, train
from .baselines import max_link_policy, random_valid_policy
from .channel import Topology
from .env import EnvConfig, RelayEnv, evaluate_policy
from .nn import load_checkpoint, save_checkpoint

CSV_COLUMNS = ("iteration", "throughput", "loss", "epsilon",
               "mean_abs_invalid_q", "seconds")

# Per-relay geometry of the non-identical scenario; the identical one puts
# every relay at the midpoint so all links share one distance.
INID_RELAY_POS = ((4.0, -2.6), (2.9, 2.1), (6.3, 2.5), (3.6, -1.2), (4.5, 2.1),
                  (7.8, 0.2), (4.1, 3.5), (6.7, -2.9), (5.2, 1.8), (7.6, 2.1))

DEFAULTS = {
    "preset": "iid_default",
    "relays": 10,
    "buffer": 10,
    "eta": 8.0,
    "delay": 6,
    "algorithm": "q",
    "assist": "decision",
    "seed": 0,
    "rounds": 20,
    "power_db": 50.0,
    "alpha": 3.0,
    "discount": 0.9,
    "epsilon_decay": 0.999,
    "epsilon_min": 0.1,
    "learning_rate": 0.01,
    "phase_size": 500,
    "batch_size": 32,
    "updates_per_sync": 100,
    "hidden": "128,128",
    "eval_slots": 10000,
}

SWEEP_AXES = {"delay": "delay", "rate": "eta", "relays": "relays"}
BASELINE_POLICIES = ("max-link", "random")
TRAINED_POLICIES = ("q-decision", "q-punish", "sarsa-decision", "sarsa-punish")


@dataclass(frozen=True)
class ScenarioPreset:
    name: str
    env: EnvConfig
    train: TrainConfig


def _convert(key: str, raw: str):
    kind = type(DEFAULTS[key])
    if kind is int:
        return int(raw)
    if kind is float:
        return float(raw)
    return raw


def parse_config_file(path) -> dict:
    """Flat ``key = value`` file, ``#`` comments and blank lines ignored."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in DEFAULTS:
            raise ValueError(f"{path}:{lineno}: unknown setting {key!r}")
        values[key] = _convert(key, raw)
    return values


def resolve_settings(file_values: dict | None = None,
                     cli_values: dict | None = None) -> dict:
    """Merge defaults, config-file values, and CLI values (later wins) into a
    fully typed settings dict."""
    settings = dict(DEFAULTS)
    for layer in (file_values, cli_values):
        if not layer:
            continue
        for key, value in layer.items():
            if value is None:
                continue
            if key not in DEFAULTS:
                raise ValueError(f"unknown setting {key!r}")
            settings[key] = _convert(key, value) if isinstance(value, str) else value
    return settings


def parse_hidden(spec: str) -> tuple[int, ...]:
    if not spec.strip():
        return ()
    return tuple(int(part) for part in spec.split(","))


def build_preset(settings: dict) -> ScenarioPreset:
    """Turn a settings dict into concrete environment and training configs."""
    k = settings["relays"]
    if settings["preset"] == "iid_default":
        relay_pos = ((5.0, 0.0),) * k
    elif settings["preset"] == "inid_default":
        if k > len(INID_RELAY_POS):
            raise ValueError(f"inid_default defines {len(INID_RELAY_POS)} relay "
                             f"positions, requested {k}")
        relay_pos = INID_RELAY_POS[:k]
    else:
        raise ValueError(f"unknown preset {settings['preset']!r}")
    topo = Topology(
        source_pos=(0.0, 0.0),
        dest_pos=(10.0, 0.0),
        relay_pos=relay_pos,
        path_loss_exp=settings["alpha"],
        power_to_noise=10.0 ** (settings["power_db"] / 10.0),
    )
    env_cfg = EnvConfig(
        topology=topo,
        buffer_size=settings["buffer"],
        target_rate=settings["eta"],
        target_delay=settings["delay"],
        invalid_action_mode="masked" if settings["assist"] == "decision" else "punishable",
    )
    train_cfg = TrainConfig(
        discount=settings["discount"],
        epsilon_decay=settings["epsilon_decay"],
        epsilon_min=settings["epsilon_min"],
        learning_rate=settings["learning_rate"],
        phase_size=settings["phase_size"],
        batch_size=settings["batch_size"],
        updates_per_sync=settings["updates_per_sync"],
        rounds=settings["rounds"],
        algorithm=settings["algorithm"],
        assist=settings["assist"],
        seed=settings["seed"],
        hidden=parse_hidden(settings["hidden"]),
        eval_slots=settings["eval_slots"],
    )
    return ScenarioPreset(settings["preset"], env_cfg, train_cfg)


# --- metrics CSV ----------------------------------------------------------

def write_metrics_csv(path, rows: list[Metrics], settings: dict) -> None:
    lines = [f"# {key}={settings[key]}" for key in sorted(settings)]
    lines.append(",".join(CSV_COLUMNS))
    for row in rows:
        lines.append(",".join([
            str(row.iteration), repr(row.throughput), repr(row.loss),
            repr(row.epsilon), repr(row.mean_abs_invalid_q), repr(row.seconds),
        ]))
    Path(path).write_text("\n".join(lines) + "\n")


def read_metrics_csv(path) -> tuple[dict, list[Metrics]]:
    """Inverse of :func:`write_metrics_csv`; every data row comes back as a
    Metrics value and the header comments as a settings dict."""
    settings, rows = {}, []
    header_seen = False
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, raw = line[1:].strip().partition("=")
            if key in DEFAULTS:
                settings[key] = _convert(key, raw)
            continue
        if not line.strip():
            continue
        if not header_seen:
            if tuple(line.split(",")) != CSV_COLUMNS:
                raise ValueError(f"{path}: unexpected CSV header {line!r}")
            header_seen = True
            continue
        parts = line.split(",")
        rows.append(Metrics(int(parts[0]), *map(float, parts[1:])))
    if not header_seen:
        raise ValueError(f"{path}: missing CSV header")
    return settings, rows


# --- run drivers ----------------------------------------------------------

def run_train(settings: dict, out_dir) -> tuple:
    """Train one variant; writes ``metrics.csv`` and ``checkpoint.txt`` under
    ``out_dir`` and returns (network, metrics rows, csv path, checkpoint path)."""
    preset = build_preset(settings)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    def env_factory(rng):
        return RelayEnv(preset.env, rng)

    net, metrics = train(env_factory, preset.train)
    csv_path = out / "metrics.csv"
    write_metrics_csv(csv_path, metrics, settings)
    ckpt_path = out / "checkpoint.txt"
    save_checkpoint(net, ckpt_path, {k: str(v) for k, v in sorted(settings.items())})
    return net, metrics, csv_path, ckpt_path


def run_eval(target: str, settings: dict, n_slots: int,
             out_dir=None) -> float:
    """Delay-constrained throughput of a policy over ``n_slots`` fresh slots.

    ``target`` is a checkpoint path or one of the named baselines. Trained
    networks are evaluated greedily, masked to valid actions when they were
    trained with decision assistance. Max-link runs on the punishing
    environment variant because its picks ignore channel outages.
    """
    if n_slots < 1:
        raise ValueError("n_slots must be >= 1")
    settings = dict(settings)
    env_ss, policy_ss = np.random.SeedSequence(settings["seed"]).spawn(2)
    if target == "max-link":
        settings["assist"] = "punish"
        policy = max_link_policy
    elif target == "random":
        settings["assist"] = "decision"
        policy = random_valid_policy(np.random.default_rng(policy_ss))
    else:
        net, meta = load_checkpoint(target)
        if "assist" in meta:
            settings["assist"] = meta["assist"]
        policy = greedy_policy(net, masked=settings["assist"] == "decision")
    preset = build_preset(settings)
    throughput = evaluate_policy(policy, preset.env, n_slots,
                                 np.random.default_rng(env_ss))
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "eval.txt").write_text(
            f"policy={target}\nslots={n_slots}\nthroughput={throughput!r}\n")
    return throughput


def _policy_label(settings: dict) -> str:
    return f"{settings['algorithm']}-{settings['assist']}"


def _sweep_job(job: dict) -> float:
    settings = job["settings"]
    if job["policy"] in BASELINE_POLICIES:
        return run_eval(job["policy"], settings, job["slots"])
    algorithm, assist = job["policy"].split("-")
    settings = dict(settings, algorithm=algorithm, assist=assist)
    _, _, _, ckpt = run_train(settings, job["out"])
    return run_eval(str(ckpt), settings, job["slots"])


def run_sweep(axis: str, values, settings: dict, out_dir, policies=None,
              n_seeds: int = 3, eval_slots: int = 100_000) -> Path:
    """Train+evaluate every (axis value, policy, seed) combination and write
    one aggregated CSV of per-policy medians across seeds.

    Independent points run in a process pool when more than one core is
    available; results merge in job order either way, so the output file is
    identical no matter the execution schedule.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {sorted(SWEEP_AXES)}")
    values = list(values)
    if not values:
        raise ValueError("sweep needs at least one axis value")
    if policies is None:
        policies = [_policy_label(settings)]
    for policy in policies:
        if policy not in BASELINE_POLICIES and policy not in TRAINED_POLICIES:
            raise ValueError(f"unknown policy {policy!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    key = SWEEP_AXES[axis]

    jobs = []
    for value in values:
        for policy in policies:
            for offset in range(n_seeds):
                job_settings = dict(settings)
                job_settings[key] = _convert(key, str(value)) if isinstance(value, str) else value
                job_settings["seed"] = settings["seed"] + offset
                jobs.append({
                    "policy": policy,
                    "settings": job_settings,
                    "slots": eval_slots,
                    "out": str(out / "runs" / f"{axis}{job_settings[key]}-{policy}-seed{job_settings['seed']}"),
                })

    workers = min(len(jobs), os.cpu_count() or 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_job, jobs))
    else:
        results = [_sweep_job(job) for job in jobs]

    lines = [f"# axis={axis}",
             f"# seeds={','.join(str(settings['seed'] + i) for i in range(n_seeds))}"]
    lines += [f"# {k}={settings[k]}" for k in sorted(settings) if k != SWEEP_AXES[axis]]
    lines.append(",".join([axis] + list(policies)))
    cursor = 0
    for value in values:
        cells = [str(value)]
        for _ in policies:
            per_seed = results[cursor:cursor + n_seeds]
            cursor += n_seeds
            cells.append(repr(median(per_seed)))
        lines.append(",".join(cells))
    sweep_path = out / "sweep.csv"
    sweep_path.write_text("\n".join(lines) + "\n")
    return sweep_path


def read_sweep_csv(path) -> tuple[str, list[str], list[tuple]]:
    """Returns (axis name, policy labels, rows of (value, medians...))."""
    axis, policies, rows = None, None, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#") or not line.strip():
            continue
        parts = line.split(",")
        if policies is None:
            axis, policies = parts[0], parts[1:]
            continue
        rows.append((float(parts[0]), *map(float, parts[1:])))
    if policies is None:
        raise ValueError(f"{path}: missing sweep header")
    return axis, policies, rows
