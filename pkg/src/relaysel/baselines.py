"""Non-learning relay selection rules used as comparison points."""

from __future__ import annotations

import numpy as np

from .env import RelayEnv


def max_link_select(env: RelayEnv) -> int:
    """Pick the buffer-available link with the highest received SNR.

    Candidate source->relay links need a non-full buffer, relay->destination
    links a non-empty one; channel quality does not gate candidacy. Among
    candidates the one with the largest ptn * g / d^alpha wins (ties to the
    lowest action index), and the slot is still spent if that link is in
    outage. With every buffer at a boundary exclusion may leave no candidate;
    then the pick is the idle action.
    """
    topo = env.cfg.topology
    k = topo.num_relays
    gains = env.state.gains
    snr = np.concatenate([
        topo.power_to_noise * gains.sr / topo.dist_sr ** topo.path_loss_exp,
        topo.power_to_noise * gains.rd / topo.dist_rd ** topo.path_loss_exp,
    ])
    available = np.concatenate([
        ~np.array([b.is_full for b in env.state.buffers]),
        ~np.array([b.is_empty for b in env.state.buffers]),
    ])
    if not available.any():
        return 0
    snr = np.where(available, snr, -np.inf)
    return 1 + int(np.argmax(snr))


def max_link_policy(env: RelayEnv) -> int:
    """Policy-shaped alias so the rule plugs into evaluation helpers."""
    return max_link_select(env)


def random_valid_policy(rng: np.random.Generator):
    """Uniform choice over the currently valid actions (idle included)."""

    def policy(env: RelayEnv) -> int:
        valid = np.flatnonzero(env.mask)
        return int(valid[rng.integers(len(valid))])

    return policy
