"""Experience generation, replay targets, training loop, tabular oracles.

Four deep variants come from two independent switches:

* ``algorithm``: ``"q"`` bootstraps on the best next-state value;
  ``"sarsa"`` bootstraps on the value of the action actually predicted for
  the next state (that prediction is carried in the experience).
* ``assist``: ``"decision"`` masks selection to valid actions and augments
  every replay sample with zero-target pairs for the invalid actions of its
  state; ``"punish"`` leaves selection unmasked so invalid picks happen,
  collect -1, and change nothing.

One training iteration = generate a fresh phase of experiences with the
prediction network frozen, sample a batch, build targets against the frozen
target network, and apply one Adam update. The target network is re-synced
from the prediction network every ``updates_per_sync`` iterations.
"""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .env import ActionClass, RelayEnv, valid_mask_from_vector
from .nn import (AdamState, Network, TargetSpec, adam_step, clone, forward,
                 forward_batch, init_network, loss_and_gradient, copy_into)


@dataclass(frozen=True)
class Experience:
    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    valid_mask: np.ndarray            # validity at `state`; the no-op entry is always True
    next_action: int | None = None    # present exactly for Sarsa experiences


@dataclass(frozen=True)
class TrainConfig:
    discount: float = 0.9
    epsilon_decay: float = 0.999
    epsilon_min: float = 0.1
    learning_rate: float = 0.01
    phase_size: int = 500         # experiences generated per update
    batch_size: int = 32          # replay samples per update
    updates_per_sync: int = 100   # prediction updates between target copies
    rounds: int = 20              # outer repetitions (one target sync each)
    algorithm: str = "q"          # "q" | "sarsa"
    assist: str = "decision"      # "decision" | "punish"
    seed: int = 0
    hidden: tuple[int, ...] = (128, 128)
    eval_slots: int = 10_000      # greedy rollout length for the logged throughput

    def __post_init__(self):
        if not 0 < self.discount < 1:
            raise ValueError("discount must be in (0, 1)")
        if not 0 < self.epsilon_decay < 1:
            raise ValueError("epsilon_decay must be in (0, 1)")
        if not 0 < self.epsilon_min < 1:
            raise ValueError("epsilon_min must be in (0, 1)")
        if self.batch_size > self.phase_size:
            raise ValueError("batch_size must not exceed phase_size")
        if self.algorithm not in ("q", "sarsa"):
            raise ValueError("algorithm must be 'q' or 'sarsa'")
        if self.assist not in ("decision", "punish"):
            raise ValueError("assist must be 'decision' or 'punish'")

    @property
    def masked(self) -> bool:
        return self.assist == "decision"


@dataclass(frozen=True)
class Metrics:
    """One logged row per target sync; `seconds` is wall clock and is the
    only field outside the determinism contract."""

    iteration: int               # cumulative prediction updates so far
    throughput: float            # greedy held-out throughput, packets/slot
    loss: float                  # mean training loss over the round
    epsilon: float               # exploration rate at the round's last update
    mean_abs_invalid_q: float    # |Q| averaged over invalid actions seen in eval
    seconds: float


def epsilon(iteration: int, decay: float, minimum: float) -> float:
    """Exploration rate at a 1-based training iteration: starts at 1, decays
    geometrically, floors at ``minimum``."""
    if iteration < 1:
        raise ValueError("iteration counts from 1")
    return max(decay ** (iteration - 1), minimum)


def select_action(net: Network, state: np.ndarray, mask: np.ndarray, eps: float,
                  rng: np.random.Generator, masked: bool) -> int:
    """Epsilon-greedy pick over the candidate actions (valid ones when masked,
    all otherwise). Greedy ties break to the lowest index."""
    if masked:
        if rng.random() < eps:
            candidates = np.flatnonzero(mask)
            return int(candidates[rng.integers(len(candidates))])
        q = forward(net, state)
        return int(np.argmax(np.where(mask, q, -np.inf)))
    if rng.random() < eps:
        return int(rng.integers(len(mask)))
    return int(np.argmax(forward(net, state)))


def generate_experiences(env: RelayEnv, net: Network, count: int, eps: float,
                         rng: np.random.Generator, algorithm: str = "q",
                         masked: bool = True) -> list[Experience]:
    """Run ``count`` environment slots and record one experience per slot.

    Q-learning picks each action fresh from the current state; Sarsa applies
    the action predicted at the previous slot and records the prediction for
    the next one (the first action of a phase is picked fresh).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    out: list[Experience] = []
    if algorithm == "sarsa":
        state, mask = env.encoded, env.mask
        action = select_action(net, state, mask, eps, rng, masked)
        for _ in range(count):
            result = env.step(action)
            nstate, nmask = env.encoded, env.mask
            naction = select_action(net, nstate, nmask, eps, rng, masked)
            out.append(Experience(state, action, result.reward, nstate, mask, naction))
            state, mask, action = nstate, nmask, naction
    else:
        for _ in range(count):
            state, mask = env.encoded, env.mask
            action = select_action(net, state, mask, eps, rng, masked)
            result = env.step(action)
            out.append(Experience(state, action, result.reward, env.encoded, mask))
    return out


def build_targets(batch: list[Experience], prediction: Network, target: Network,
                  cfg: TrainConfig) -> list[TargetSpec]:
    """Bootstrapped scalar targets plus, in decision-assist mode, the
    zero-target mask holding the invalid actions recorded with each sample.

    The Q-learning bootstrap maximizes over the next state's valid actions in
    decision-assist mode (invalid ones are being trained toward zero) and over
    all actions in punishment mode.
    """
    num_relays = (len(batch[0].valid_mask) - 1) // 2
    q_next = forward_batch(target, np.stack([e.next_state for e in batch]))
    specs = []
    for i, exp in enumerate(batch):
        if cfg.algorithm == "sarsa":
            boot = q_next[i, exp.next_action]
        elif cfg.masked:
            nmask = valid_mask_from_vector(exp.next_state, num_relays)
            boot = np.max(q_next[i][nmask])
        else:
            boot = np.max(q_next[i])
        y = cfg.discount * float(boot) + exp.reward
        zero_mask = np.flatnonzero(~exp.valid_mask) if cfg.masked \
            else np.zeros(0, dtype=np.int64)
        specs.append(TargetSpec(exp.state, exp.action, y, zero_mask))
    return specs


def greedy_rollout(net: Network, env: RelayEnv, n_slots: int,
                   masked: bool) -> tuple[float, float]:
    """Greedy (eps=0) rollout; returns (throughput, mean |Q| over the invalid
    actions of every visited state)."""
    rewarded = 0
    abs_q_sum, abs_q_n = 0.0, 0
    for _ in range(n_slots):
        mask = env.mask
        q = forward(net, env.encoded)
        invalid = ~mask
        n_inv = int(invalid.sum())
        if n_inv:
            abs_q_sum += float(np.abs(q[invalid]).sum())
            abs_q_n += n_inv
        action = int(np.argmax(np.where(mask, q, -np.inf))) if masked else int(np.argmax(q))
        if env.step(action).action_class is ActionClass.VR:
            rewarded += 1
    return rewarded / n_slots, (abs_q_sum / abs_q_n if abs_q_n else 0.0)


def greedy_policy(net: Network, masked: bool = True):
    """Policy closure for :func:`relaysel.env.evaluate_policy`."""

    def policy(env: RelayEnv) -> int:
        q = forward(net, env.encoded)
        if masked:
            return int(np.argmax(np.where(env.mask, q, -np.inf)))
        return int(np.argmax(q))

    return policy


def train(env_factory, cfg: TrainConfig, stop_when=None):
    """Full training run; returns (trained prediction network, metrics list).

    ``env_factory(rng)`` must build a fresh environment; it is called once
    for the persistent training environment and once per evaluation with an
    identically re-seeded generator, so the logged throughput is measured on
    the same held-out channel sequence every round. ``stop_when``, if given,
    is called with each metrics row and ends training early when true.
    """
    ss_init, ss_env, ss_agent, ss_eval = np.random.SeedSequence(cfg.seed).spawn(4)
    env = env_factory(np.random.default_rng(ss_env))
    rng = np.random.default_rng(ss_agent)
    k = env.cfg.num_relays
    prediction = init_network(5 * k, cfg.hidden, 2 * k + 1, np.random.default_rng(ss_init))
    target = clone(prediction)
    opt = AdamState.for_network(prediction)

    metrics: list[Metrics] = []
    iteration = 0
    started = time.perf_counter()
    for _ in range(cfg.rounds):
        losses = []
        eps = cfg.epsilon_min
        for _ in range(cfg.updates_per_sync):
            iteration += 1
            eps = epsilon(iteration, cfg.epsilon_decay, cfg.epsilon_min)
            phase = generate_experiences(env, prediction, cfg.phase_size, eps, rng,
                                         cfg.algorithm, cfg.masked)
            picks = rng.choice(cfg.phase_size, size=cfg.batch_size, replace=False)
            specs = build_targets([phase[i] for i in picks], prediction, target, cfg)
            loss, grads = loss_and_gradient(prediction, specs)
            adam_step(prediction, grads, opt, cfg.learning_rate)
            losses.append(loss)
        copy_into(prediction, target)
        eval_env = env_factory(np.random.default_rng(ss_eval))
        throughput, mean_abs_q = greedy_rollout(prediction, eval_env, cfg.eval_slots,
                                                cfg.masked)
        metrics.append(Metrics(
            iteration=iteration,
            throughput=throughput,
            loss=float(np.mean(losses)),
            epsilon=eps,
            mean_abs_invalid_q=mean_abs_q,
            seconds=time.perf_counter() - started,
        ))
        if stop_when is not None and stop_when(metrics[-1]):
            break
    return prediction, metrics


# --- tabular oracle -------------------------------------------------------

def new_table(num_actions: int):
    """Q-table over lazily discovered states; rows are per-action values."""
    return defaultdict(lambda: np.zeros(num_actions))


def tabular_update(table, state_key, action: int, reward: float, next_key, *,
                   algorithm: str, step_size: float, discount: float,
                   next_actions=None, next_action: int | None = None) -> None:
    """One-step temporal-difference update of ``table[state_key][action]``.

    Q-learning bootstraps on the max over ``next_actions`` (all actions when
    None); Sarsa on the entry for ``next_action``.
    """
    if algorithm == "sarsa":
        boot = table[next_key][next_action]
    else:
        row = table[next_key]
        boot = row.max() if next_actions is None else row[next_actions].max()
    row = table[state_key]
    row[action] += step_size * (reward + discount * boot - row[action])


def state_key(env: RelayEnv) -> tuple:
    return tuple(env.lengths), tuple(env.codes)


def tabular_train(env: RelayEnv, n_slots: int, *, algorithm: str = "q",
                  step_size: float = 0.1, discount: float = 0.9,
                  eps: float = 0.1, rng: np.random.Generator):
    """Small-instance tabular trainer with masked epsilon-greedy behavior."""
    table = new_table(env.cfg.num_actions)

    def pick(key, mask):
        valid = np.flatnonzero(mask)
        if rng.random() < eps:
            return int(valid[rng.integers(len(valid))])
        row = table[key]
        return int(valid[np.argmax(row[valid])])

    key, mask = state_key(env), env.mask
    action = pick(key, mask)
    for _ in range(n_slots):
        result = env.step(action)
        nkey, nmask = state_key(env), env.mask
        naction = pick(nkey, nmask)
        tabular_update(table, key, action, result.reward, nkey,
                       algorithm=algorithm, step_size=step_size, discount=discount,
                       next_actions=np.flatnonzero(nmask), next_action=naction)
        key, action = nkey, naction
    return table


def tabular_greedy_action(table, env: RelayEnv) -> int:
    """Highest-valued valid action under the table at the current state."""
    valid = np.flatnonzero(env.mask)
    return int(valid[np.argmax(table[state_key(env)][valid])])
