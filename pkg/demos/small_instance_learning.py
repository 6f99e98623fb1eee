"""
Learning the push/pop alternation on a one-relay instance
=========================================================

With a single relay, a one-slot buffer, and a channel pinned above the
target rate, the problem collapses to a two-state MDP whose optimum (0.5
packets/slot) is the strict push/pop alternation. Small enough to check
three ways: exhaustive policy enumeration, a tabular learner, and the
deep learner that the full-scale experiments use.
"""

import numpy as np

from relaysel import (
    EnvConfig,
    RelayEnv,
    Topology,
    TrainConfig,
    constant_gain_sampler,
    evaluate_policy,
    tabular_greedy_action,
    tabular_train,
    train,
)

topo = Topology(source_pos=(0.0, 0.0), dest_pos=(10.0, 0.0),
                relay_pos=((5.0, 0.0),), path_loss_exp=3.0,
                power_to_noise=1e5)
cfg = EnvConfig(topology=topo, buffer_size=1, target_rate=8.0,
                target_delay=6, invalid_action_mode="masked")
always_on = constant_gain_sampler(5.0)

# 1. enumeration: two reachable states (buffer empty/full), two valid
# actions each, so four deterministic policies cover the whole space
print("deterministic policies (action on empty, action on full):")
for on_empty in (0, 1):
    for on_full in (0, 2):
        thr = evaluate_policy(
            lambda env, a=on_empty, b=on_full: a if env.lengths[0] == 0 else b,
            cfg, 2000, np.random.default_rng(0), always_on)
        print(f"  ({on_empty}, {on_full}) -> throughput {thr:.3f}")

# 2. tabular temporal differences find the same alternation
env = RelayEnv(cfg, np.random.default_rng(1), always_on)
table = tabular_train(env, 30_000, algorithm="q", rng=np.random.default_rng(2))
probe = RelayEnv(cfg, np.random.default_rng(3), always_on)
push = tabular_greedy_action(table, probe)
probe.step(push)
pop = tabular_greedy_action(table, probe)
print(f"\ntabular greedy policy: empty -> action {push}, full -> action {pop}")

# 3. the deep learner with decision-assisted targets; the masked greedy
# evaluation is logged once per outer round
train_cfg = TrainConfig(algorithm="sarsa", assist="decision", seed=0,
                        rounds=8, hidden=(16, 16), phase_size=120,
                        batch_size=32, updates_per_sync=25, eval_slots=2000)
_, metrics = train(lambda rng: RelayEnv(cfg, rng, always_on), train_cfg)

print("\ndeep learner, greedy throughput by round:")
for row in metrics:
    print(f"  round {row.iteration // train_cfg.updates_per_sync:>2} "
          f"(eps={row.epsilon:.2f}): {row.throughput:.3f}")
