"""Feed-forward Q-value approximator with explicit backprop and Adam.

Everything is 64-bit numpy. The loss is the summed squared error of each
sample's selected-action value against its scalar target, plus squared
pull-to-zero terms for every action index in the sample's zero-target mask:

    loss = sum_i [ (y_i - Q(s_i, a_i))^2 + sum_{a in mask_i} Q(s_i, a)^2 ]

With empty masks this reduces to the plain bootstrapped squared error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ACTIVATIONS = ("relu", "identity")


@dataclass
class Layer:
    weights: np.ndarray  # (out_dim, in_dim)
    bias: np.ndarray     # (out_dim,)
    activation: str

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.weights.shape[0] != self.bias.shape[0]:
            raise ValueError("weight/bias shape mismatch")


@dataclass
class Network:
    layers: list[Layer]

    @property
    def input_dim(self) -> int:
        return self.layers[0].weights.shape[1]

    @property
    def output_dim(self) -> int:
        return self.layers[-1].weights.shape[0]

    def architecture(self) -> list[tuple[int, int, str]]:
        return [(l.weights.shape[1], l.weights.shape[0], l.activation) for l in self.layers]


def init_network(input_dim: int, hidden: tuple[int, ...], output_dim: int,
                 rng: np.random.Generator) -> Network:
    """Build a rectifier MLP with an identity output layer.

    Weights are uniform in +-1/sqrt(fan_in) (variance-preserving), biases zero.
    """
    dims = (input_dim, *hidden, output_dim)
    layers = []
    for i in range(len(dims) - 1):
        fan_in, fan_out = dims[i], dims[i + 1]
        bound = 1.0 / np.sqrt(fan_in)
        w = rng.uniform(-bound, bound, size=(fan_out, fan_in))
        act = "identity" if i == len(dims) - 2 else "relu"
        layers.append(Layer(weights=w, bias=np.zeros(fan_out), activation=act))
    return Network(layers)


def forward(net: Network, x: np.ndarray) -> np.ndarray:
    """Q-value vector for one input state; pure and deterministic."""
    if x.shape != (net.input_dim,):
        raise ValueError(f"input shape {x.shape} != ({net.input_dim},)")
    a = x
    for layer in net.layers:
        a = layer.weights @ a + layer.bias
        if layer.activation == "relu":
            np.maximum(a, 0.0, out=a)
    return a


def forward_batch(net: Network, x: np.ndarray) -> np.ndarray:
    """Row-wise forward pass for a (batch, input_dim) matrix."""
    a = x
    for layer in net.layers:
        a = a @ layer.weights.T + layer.bias
        if layer.activation == "relu":
            np.maximum(a, 0.0, out=a)
    return a


@dataclass
class TargetSpec:
    """One training pair: pull Q(state, action) toward target, masked outputs toward 0."""

    state: np.ndarray
    action: int
    target: float
    zero_mask: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def __post_init__(self):
        if self.action in self.zero_mask:
            raise ValueError("zero-target mask must not contain the selected action")


def loss_and_gradient(net: Network, batch: list[TargetSpec]):
    """Summed masked squared-error loss and its exact parameter gradients.

    Returns ``(loss, grads)`` where grads is a per-layer list of
    ``(d_weights, d_bias)`` matching the network's parameter shapes.
    """
    if not batch:
        raise ValueError("batch must be nonempty")
    x = np.stack([spec.state for spec in batch])
    n = len(batch)

    pre: list[np.ndarray] = []   # pre-activation per layer
    acts: list[np.ndarray] = [x]
    a = x
    for layer in net.layers:
        z = a @ layer.weights.T + layer.bias
        pre.append(z)
        a = np.maximum(z, 0.0) if layer.activation == "relu" else z
        acts.append(a)
    q = acts[-1]

    rows = np.arange(n)
    sel = np.array([spec.action for spec in batch])
    y = np.array([spec.target for spec in batch])
    err = y - q[rows, sel]
    loss = float(np.dot(err, err))

    # dL/dQ: -2*(y - Q) on the selected outputs, 2*Q on masked outputs.
    g_out = np.zeros_like(q)
    g_out[rows, sel] = -2.0 * err
    for i, spec in enumerate(batch):
        if spec.zero_mask.size:
            qm = q[i, spec.zero_mask]
            loss += float(np.dot(qm, qm))
            g_out[i, spec.zero_mask] = 2.0 * qm

    grads: list[tuple[np.ndarray, np.ndarray]] = [None] * len(net.layers)
    delta = g_out
    for li in range(len(net.layers) - 1, -1, -1):
        layer = net.layers[li]
        if layer.activation == "relu":
            delta = delta * (pre[li] > 0.0)
        grads[li] = (delta.T @ acts[li], delta.sum(axis=0))
        if li:
            delta = delta @ layer.weights
    return loss, grads


@dataclass
class AdamState:
    """First/second-moment accumulators mirroring a network's parameters."""

    m: list[tuple[np.ndarray, np.ndarray]]
    v: list[tuple[np.ndarray, np.ndarray]]
    step: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @staticmethod
    def for_network(net: Network) -> "AdamState":
        zeros = lambda: [(np.zeros_like(l.weights), np.zeros_like(l.bias)) for l in net.layers]
        return AdamState(m=zeros(), v=zeros())


def adam_step(net: Network, grads, opt: AdamState, lr: float) -> None:
    """One bias-corrected Adam update of the network parameters, in place."""
    opt.step += 1
    c1 = 1.0 - opt.beta1**opt.step
    c2 = 1.0 - opt.beta2**opt.step
    for layer, (gw, gb), (mw, mb), (vw, vb) in zip(net.layers, grads, opt.m, opt.v):
        for param, g, m, v in ((layer.weights, gw, mw, vw), (layer.bias, gb, mb, vb)):
            m *= opt.beta1
            m += (1.0 - opt.beta1) * g
            v *= opt.beta2
            v += (1.0 - opt.beta2) * np.square(g)
            param -= lr * (m / c1) / (np.sqrt(v / c2) + opt.eps)


def copy_into(src: Network, dst: Network) -> None:
    """Copy parameters of ``src`` into ``dst`` (architectures must match)."""
    if src.architecture() != dst.architecture():
        raise ValueError("architecture mismatch")
    for s, d in zip(src.layers, dst.layers):
        np.copyto(d.weights, s.weights)
        np.copyto(d.bias, s.bias)


def clone(net: Network) -> Network:
    return Network([Layer(l.weights.copy(), l.bias.copy(), l.activation) for l in net.layers])


CHECKPOINT_MAGIC = "relaysel-net 1"


def save_checkpoint(net: Network, path: str, meta: dict[str, str] | None = None) -> None:
    """Write a network to a versioned text checkpoint.

    Layout: magic line; ``meta key value`` lines; ``layers N``; one
    ``layer in_dim out_dim activation`` line per layer; then per layer the
    weight matrix (one row per line, ``%.17g`` so doubles round-trip
    bit-exactly) followed by the bias vector on one line.
    """
    lines = [CHECKPOINT_MAGIC]
    for key, value in sorted((meta or {}).items()):
        lines.append(f"meta {key} {value}")
    lines.append(f"layers {len(net.layers)}")
    for in_dim, out_dim, act in net.architecture():
        lines.append(f"layer {in_dim} {out_dim} {act}")
    for layer in net.layers:
        for row in layer.weights:
            lines.append(" ".join("%.17g" % v for v in row))
        lines.append(" ".join("%.17g" % v for v in layer.bias))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_checkpoint(path: str) -> tuple[Network, dict[str, str]]:
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or lines[0] != CHECKPOINT_MAGIC:
        raise ValueError(f"{path}: not a {CHECKPOINT_MAGIC!r} checkpoint")
    pos = 1
    meta: dict[str, str] = {}
    while lines[pos].startswith("meta "):
        _, key, value = lines[pos].split(" ", 2)
        meta[key] = value
        pos += 1
    n_layers = int(lines[pos].split()[1])
    pos += 1
    shapes = []
    for _ in range(n_layers):
        _, in_dim, out_dim, act = lines[pos].split()
        shapes.append((int(in_dim), int(out_dim), act))
        pos += 1
    layers = []
    for in_dim, out_dim, act in shapes:
        w = np.array([[float(v) for v in lines[pos + r].split()] for r in range(out_dim)])
        pos += out_dim
        b = np.array([float(v) for v in lines[pos].split()])
        pos += 1
        if w.shape != (out_dim, in_dim) or b.shape != (out_dim,):
            raise ValueError(f"{path}: malformed parameter block")
        layers.append(Layer(weights=w, bias=b, activation=act))
    return Network(layers), meta
