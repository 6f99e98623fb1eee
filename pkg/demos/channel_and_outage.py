"""
Fading links, outage, and per-relay validity codes
==================================================

Walks the simulator's channel layer: draws Rayleigh fading gains, checks
the Monte Carlo outage rate against the closed form, and shows how link
usability combines with buffer occupancy into the four-way code that the
agents observe.
"""

import numpy as np

from relaysel import EnvConfig, RelayEnv, Topology, outage_probability, sample_gains

rng = np.random.default_rng(0)

# ten relays halfway between source and destination, 50 dB transmit SNR
topo = Topology(source_pos=(0.0, 0.0), dest_pos=(10.0, 0.0),
                relay_pos=((5.0, 0.0),) * 10,
                path_loss_exp=3.0, power_to_noise=1e5)
eta = 8.0  # target rate, bps/Hz

closed_form = outage_probability(5.0, eta, topo)
print(f"closed-form outage probability at 5 m: {closed_form:.4f}")

# empirical check: a link is in outage when its capacity cannot carry eta
n = 200_000
gains = sample_gains(rng, n).sr  # unit-mean exponential fading
capacity = np.log2(1.0 + topo.power_to_noise * gains / 5.0 ** 3)
print(f"Monte Carlo outage over {n} draws:       {np.mean(capacity <= eta):.4f}")

# validity codes: 1 = only source->relay usable, 2 = only relay->destination,
# 3 = both, 4 = neither. A full buffer forbids receiving and an empty one
# forbids forwarding, so the codes mix channel state with queue state.
env = RelayEnv(EnvConfig(topology=topo, buffer_size=10, target_rate=eta,
                         target_delay=6), rng)
counts = np.zeros(5, dtype=np.int64)
for _ in range(5000):
    counts[env.codes] += 1
    valid = np.flatnonzero(env.mask)
    env.step(int(rng.choice(valid)))

print("\ncode frequencies over a random walk (empty buffers pull toward 1/4):")
for code, label in ((1, "receive only"), (2, "forward only"),
                    (3, "both links up"), (4, "neither")):
    print(f"  code {code} ({label:>14}): {counts[code] / counts.sum():.3f}")
