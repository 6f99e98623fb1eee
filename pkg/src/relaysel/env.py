"""Buffer-aided relay network as a step-based decision environment.

One action per slot picks a single half-duplex link (or none). Relays hold
received packets in finite FIFO queues; a relay-to-destination transmission
scores +1 only when the packet's end-to-end delay (source slot through
delivery slot, inclusive) is within the configured target delay. Per slot
and relay, a four-way code captures which of its two links is selectable:

    1: only source->relay usable   2: only relay->destination usable
    3: both usable                 4: neither usable

A link is usable when its capacity exceeds the target rate and the buffer
can absorb the packet (not full for source->relay, not empty for
relay->destination). Selecting an unusable link is a contract violation in
``masked`` mode; in ``punishable`` mode it wastes the slot and earns -1.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .channel import LinkGains, Topology, gain_thresholds, sample_gains


class ActionKind(enum.Enum):
    NONE = 0
    SOURCE_TO_RELAY = 1
    RELAY_TO_DEST = 2


@dataclass(frozen=True)
class Action:
    """A single-slot link selection; ``relay`` is a 0-based index (None for no-op)."""

    kind: ActionKind
    relay: int | None = None

    def __post_init__(self):
        if (self.kind is ActionKind.NONE) != (self.relay is None):
            raise ValueError("relay index required exactly for link actions")

    @staticmethod
    def none() -> "Action":
        return Action(ActionKind.NONE)

    @staticmethod
    def source_to_relay(relay: int) -> "Action":
        return Action(ActionKind.SOURCE_TO_RELAY, relay)

    @staticmethod
    def relay_to_dest(relay: int) -> "Action":
        return Action(ActionKind.RELAY_TO_DEST, relay)

    def to_index(self, num_relays: int) -> int:
        """Canonical index: 0 = no-op, 1..K = source->relay, K+1..2K = relay->dest."""
        if self.kind is ActionKind.NONE:
            return 0
        if not 0 <= self.relay < num_relays:
            raise ValueError(f"relay {self.relay} out of range for K={num_relays}")
        if self.kind is ActionKind.SOURCE_TO_RELAY:
            return 1 + self.relay
        return 1 + num_relays + self.relay

    @staticmethod
    def from_index(index: int, num_relays: int) -> "Action":
        if not 0 <= index <= 2 * num_relays:
            raise ValueError(f"action index {index} out of range for K={num_relays}")
        if index == 0:
            return Action.none()
        if index <= num_relays:
            return Action.source_to_relay(index - 1)
        return Action.relay_to_dest(index - num_relays - 1)


class ActionClass(enum.Enum):
    VR = "rewarded delivery"
    VZ = "valid, zero reward"
    INVALID = "invalid selection"


class InvalidActionError(Exception):
    """An invalid action reached a masked-mode environment (agent-side masking bug)."""


@dataclass(frozen=True)
class Packet:
    origin_slot: int


class RelayBuffer:
    """Finite FIFO packet queue for one relay."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.queue: deque[Packet] = deque()

    def __len__(self) -> int:
        return len(self.queue)

    @property
    def is_full(self) -> bool:
        return len(self.queue) >= self.capacity

    @property
    def is_empty(self) -> bool:
        return not self.queue

    def push(self, packet: Packet) -> None:
        if self.is_full:
            raise OverflowError("push on full buffer")
        self.queue.append(packet)

    def pop(self) -> Packet:
        if self.is_empty:
            raise IndexError("pop on empty buffer")
        return self.queue.popleft()


@dataclass(frozen=True)
class EnvConfig:
    topology: Topology
    buffer_size: int
    target_rate: float
    target_delay: int
    invalid_action_mode: str = "masked"  # "masked" | "punishable"

    def __post_init__(self):
        if self.buffer_size < 1:
            raise ValueError("buffer_size must be >= 1")
        if self.target_delay < 2:
            raise ValueError("target_delay must be >= 2 (two-hop minimum)")
        if self.target_rate <= 0:
            raise ValueError("target_rate must be positive")
        if self.invalid_action_mode not in ("masked", "punishable"):
            raise ValueError("invalid_action_mode must be 'masked' or 'punishable'")

    @property
    def num_relays(self) -> int:
        return self.topology.num_relays

    @property
    def num_actions(self) -> int:
        return 2 * self.topology.num_relays + 1

    @property
    def state_dim(self) -> int:
        return 5 * self.topology.num_relays


@dataclass
class EnvState:
    t: int
    buffers: list[RelayBuffer]
    gains: LinkGains


@dataclass(frozen=True)
class StepOutcome:
    reward: float
    delivered: tuple[int, int] | None  # (relay index, delay in slots)
    action_class: ActionClass


REWARD_DELIVERY = 1.0
REWARD_NEUTRAL = 0.0
REWARD_INVALID = -1.0


def codes_from_validity(sr_ok: np.ndarray, rd_ok: np.ndarray) -> np.ndarray:
    """Combine per-link usability flags into the per-relay four-way code."""
    codes = sr_ok.astype(np.int64) + 2 * rd_ok.astype(np.int64)
    codes[codes == 0] = 4
    return codes


def classify_relay(gains_k: tuple[float, float], buffer_k: RelayBuffer,
                   cfg: EnvConfig, relay_index: int) -> int:
    """Four-way link-usability code for one relay at the current slot."""
    thr_sr, thr_rd = gain_thresholds(cfg.topology, cfg.target_rate)
    sr_ok = gains_k[0] > thr_sr[relay_index] and not buffer_k.is_full
    rd_ok = gains_k[1] > thr_rd[relay_index] and not buffer_k.is_empty
    if sr_ok and rd_ok:
        return 3
    if sr_ok:
        return 1
    if rd_ok:
        return 2
    return 4


def encode_features(lengths: np.ndarray, codes: np.ndarray, buffer_size: int) -> np.ndarray:
    """Encode (buffer lengths, codes) into the 5K network input vector.

    First K entries are lengths scaled to [0, 1]; then K one-hot groups of
    four for the codes. Injective over (lengths, codes) pairs.
    """
    k = len(lengths)
    vec = np.zeros(5 * k)
    vec[:k] = lengths / buffer_size
    vec[k + 4 * np.arange(k) + (codes - 1)] = 1.0
    return vec


def decode_features(vec: np.ndarray, num_relays: int, buffer_size: int) -> tuple[np.ndarray, np.ndarray]:
    """Invert :func:`encode_features` back to (lengths, codes)."""
    k = num_relays
    lengths = np.rint(vec[:k] * buffer_size).astype(np.int64)
    codes = np.argmax(vec[k:].reshape(k, 4), axis=1) + 1
    return lengths, codes


def valid_mask_from_codes(codes: np.ndarray) -> np.ndarray:
    """Boolean validity per action index (length 2K+1); the no-op is always valid."""
    k = len(codes)
    mask = np.empty(2 * k + 1, dtype=bool)
    mask[0] = True
    mask[1:k + 1] = (codes == 1) | (codes == 3)
    mask[k + 1:] = (codes == 2) | (codes == 3)
    return mask


def valid_mask_from_vector(vec: np.ndarray, num_relays: int) -> np.ndarray:
    """Validity mask recovered from an encoded state vector's code block."""
    codes = np.argmax(vec[num_relays:].reshape(num_relays, 4), axis=1) + 1
    return valid_mask_from_codes(codes)


class RelayEnv:
    """Single-owner environment; mutate only through :meth:`step`.

    Derived per-slot views (codes, validity mask, encoded state vector) are
    recomputed once per slot and exposed as read-only attributes; the
    authoritative state is ``.state`` (slot counter, buffers, gains).
    ``gain_sampler`` defaults to i.i.d. unit-mean exponential fading and can
    be replaced, e.g. with constant gains for enumerable toy instances.
    """

    def __init__(self, cfg: EnvConfig, rng: np.random.Generator, gain_sampler=None):
        self.cfg = cfg
        self.rng = rng
        self._sample = gain_sampler if gain_sampler is not None else sample_gains
        self._thr_sr, self._thr_rd = gain_thresholds(cfg.topology, cfg.target_rate)
        self._k = cfg.num_relays
        self._inv_l = 1.0 / cfg.buffer_size
        self._masked = cfg.invalid_action_mode == "masked"
        self.reset()

    def reset(self) -> EnvState:
        self.state = EnvState(
            t=0,
            buffers=[RelayBuffer(self.cfg.buffer_size) for _ in range(self._k)],
            gains=self._sample(self.rng, self._k),
        )
        self.lengths = np.zeros(self._k, dtype=np.int64)
        self._refresh()
        return self.state

    def _refresh(self) -> None:
        g = self.state.gains
        self._sr_ok = (g.sr > self._thr_sr) & (self.lengths < self.cfg.buffer_size)
        self._rd_ok = (g.rd > self._thr_rd) & (self.lengths > 0)
        self.codes = codes_from_validity(self._sr_ok, self._rd_ok)
        k = self._k
        mask = np.empty(2 * k + 1, dtype=bool)
        mask[0] = True
        mask[1:k + 1] = self._sr_ok
        mask[k + 1:] = self._rd_ok
        self.mask = mask
        vec = np.zeros(5 * k)
        vec[:k] = self.lengths * self._inv_l
        vec[k + 4 * np.arange(k) + (self.codes - 1)] = 1.0
        self.encoded = vec

    def valid_mask(self) -> np.ndarray:
        return self.mask

    def step(self, action) -> StepOutcome:
        """Apply one action, advance the slot, and redraw the fading gains."""
        idx = action.to_index(self._k) if isinstance(action, Action) else int(action)
        k = self._k
        state = self.state
        if idx == 0:
            reward, delivered, cls = REWARD_NEUTRAL, None, ActionClass.VZ
        elif self.mask[idx]:
            if idx <= k:
                relay = idx - 1
                state.buffers[relay].push(Packet(origin_slot=state.t))
                self.lengths[relay] += 1
                reward, delivered, cls = REWARD_NEUTRAL, None, ActionClass.VZ
            else:
                relay = idx - k - 1
                packet = state.buffers[relay].pop()
                self.lengths[relay] -= 1
                delay = state.t - packet.origin_slot + 1
                delivered = (relay, delay)
                if delay <= self.cfg.target_delay:
                    reward, cls = REWARD_DELIVERY, ActionClass.VR
                else:
                    reward, cls = REWARD_NEUTRAL, ActionClass.VZ
        else:
            if self._masked:
                raise InvalidActionError(
                    f"action index {idx} invalid at slot {state.t} in masked mode")
            reward, delivered, cls = REWARD_INVALID, None, ActionClass.INVALID
        state.t += 1
        state.gains = self._sample(self.rng, k)
        self._refresh()
        return StepOutcome(reward=reward, delivered=delivered, action_class=cls)


def encode_state(state: EnvState, cfg: EnvConfig) -> np.ndarray:
    """Standalone state encoding for callers that hold a bare EnvState."""
    thr_sr, thr_rd = gain_thresholds(cfg.topology, cfg.target_rate)
    lengths = np.array([len(b) for b in state.buffers], dtype=np.int64)
    sr_ok = (state.gains.sr > thr_sr) & (lengths < cfg.buffer_size)
    rd_ok = (state.gains.rd > thr_rd) & (lengths > 0)
    return encode_features(lengths, codes_from_validity(sr_ok, rd_ok), cfg.buffer_size)


def valid_action_set(state: EnvState, cfg: EnvConfig) -> set[Action]:
    """All actions whose links are usable this slot; always contains the no-op."""
    thr_sr, thr_rd = gain_thresholds(cfg.topology, cfg.target_rate)
    actions = {Action.none()}
    for relay, buf in enumerate(state.buffers):
        if state.gains.sr[relay] > thr_sr[relay] and not buf.is_full:
            actions.add(Action.source_to_relay(relay))
        if state.gains.rd[relay] > thr_rd[relay] and not buf.is_empty:
            actions.add(Action.relay_to_dest(relay))
    return actions


def evaluate_policy(policy, cfg: EnvConfig, n_slots: int,
                    rng: np.random.Generator, gain_sampler=None) -> float:
    """Delay-constrained throughput of ``policy`` over a fresh rollout.

    ``policy`` is called with the environment each slot and must return an
    action (or action index) that is a pure function of the current state;
    only in-deadline deliveries count.
    """
    if n_slots < 1:
        raise ValueError("n_slots must be >= 1")
    env = RelayEnv(cfg, rng, gain_sampler)
    rewarded = 0
    for _ in range(n_slots):
        if env.step(policy(env)).action_class is ActionClass.VR:
            rewarded += 1
    return rewarded / n_slots
