"""Per-slot Rayleigh-fading link model: gains, capacity, outage.

Fading power gains are unit-mean exponential (Rayleigh amplitude); path
loss enters only through the capacity formula, so the single-link outage
probability has the closed form ``1 - exp(-(2**eta - 1) * d**alpha / ptn)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Topology:
    """Static node geometry plus the radio constants shared by all links.

    ``power_to_noise`` is the linear transmit-power-to-noise ratio; distances
    between the source/destination and each relay are precomputed once.
    """

    source_pos: tuple[float, float]
    dest_pos: tuple[float, float]
    relay_pos: tuple[tuple[float, float], ...]
    path_loss_exp: float
    power_to_noise: float
    dist_sr: np.ndarray = field(init=False, repr=False, compare=False)
    dist_rd: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.relay_pos) < 1:
            raise ValueError("need at least one relay")
        if self.path_loss_exp <= 0 or self.power_to_noise <= 0:
            raise ValueError("path_loss_exp and power_to_noise must be positive")
        rel = np.asarray(self.relay_pos, dtype=float)
        src = np.asarray(self.source_pos, dtype=float)
        dst = np.asarray(self.dest_pos, dtype=float)
        d_sr = np.linalg.norm(rel - src, axis=1)
        d_rd = np.linalg.norm(rel - dst, axis=1)
        if np.any(d_sr <= 0) or np.any(d_rd <= 0):
            raise ValueError("relay coincides with an endpoint")
        object.__setattr__(self, "dist_sr", d_sr)
        object.__setattr__(self, "dist_rd", d_rd)

    @property
    def num_relays(self) -> int:
        return len(self.relay_pos)


@dataclass(frozen=True)
class LinkGains:
    """Fading power gains for the current slot, one per link."""

    sr: np.ndarray  # source -> relay k
    rd: np.ndarray  # relay k -> destination

    def __post_init__(self):
        if self.sr.shape != self.rd.shape or self.sr.ndim != 1:
            raise ValueError("sr and rd must be 1-D arrays of equal length")


def sample_gains(rng: np.random.Generator, num_relays: int) -> LinkGains:
    """Draw fresh unit-mean exponential gains for all 2K links.

    One RNG stream per experiment; a single slot consumes exactly 2K draws
    in the fixed order sr[0..K) then rd[0..K).
    """
    draws = rng.exponential(1.0, size=2 * num_relays)
    return LinkGains(sr=draws[:num_relays], rd=draws[num_relays:])


def constant_gain_sampler(value: float = 1.0):
    """Gain sampler that pins every link to a fixed gain (no randomness consumed).

    Useful for enumerable toy instances where every link should stay above
    the target rate.
    """

    def sampler(rng: np.random.Generator, num_relays: int) -> LinkGains:
        return LinkGains(sr=np.full(num_relays, value), rd=np.full(num_relays, value))

    return sampler


def link_capacity(gain: float, distance: float, topo: Topology) -> float:
    """Shannon capacity in bits/s/Hz of a single link with the given fading gain."""
    return float(np.log2(1.0 + topo.power_to_noise * gain / distance**topo.path_loss_exp))


def is_outage(capacity: float, target_rate: float) -> bool:
    """A link is in outage when its capacity is at or below the target rate."""
    return capacity <= target_rate


def outage_probability(distance: float, target_rate: float, topo: Topology) -> float:
    """Closed-form single-link outage probability under unit-mean exponential fading."""
    threshold = (2.0**target_rate - 1.0) * distance**topo.path_loss_exp / topo.power_to_noise
    return 1.0 - float(np.exp(-threshold))


def gain_thresholds(topo: Topology, target_rate: float) -> tuple[np.ndarray, np.ndarray]:
    """Minimum fading gains, per link, for capacity to exceed the target rate.

    ``capacity > eta`` is equivalent to ``gain > (2**eta - 1) * d**alpha / ptn``,
    which lets the per-slot validity test avoid any logarithms.
    """
    scale = (2.0**target_rate - 1.0) / topo.power_to_noise
    return (
        scale * topo.dist_sr**topo.path_loss_exp,
        scale * topo.dist_rd**topo.path_loss_exp,
    )
