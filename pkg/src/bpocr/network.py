"""Network topology, parameter state, initialization and the forward pass.

Weight matrix ``weights[l]`` has one row per unit of layer ``l + 1`` and one
column per unit of layer ``l``; ``biases[l]`` holds one entry per unit of
layer ``l + 1``. The input layer is linear, every other layer is tansig.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .numcore import DTYPE, Activation, ShapeError, check_finite, tansig

INIT_SCHEMES = ("paper", "symmetric")


@dataclass(frozen=True)
class Topology:
    input_size: int = 48
    hidden_layer_sizes: tuple[int, ...] = (10,)
    output_size: int = 26

    def __post_init__(self):
        object.__setattr__(self, "hidden_layer_sizes", tuple(int(h) for h in self.hidden_layer_sizes))
        if not self.hidden_layer_sizes:
            raise ValueError("at least one hidden layer is required")
        if min(self.sizes) < 1:
            raise ValueError(f"layer sizes must be >= 1, got {self.sizes}")

    @classmethod
    def uniform(cls, depth: int, hidden_size: int = 10, input_size: int = 48, output_size: int = 26) -> "Topology":
        return cls(input_size, (hidden_size,) * depth, output_size)

    @property
    def sizes(self) -> tuple[int, ...]:
        return (self.input_size, *self.hidden_layer_sizes, self.output_size)

    @property
    def depth(self) -> int:
        return len(self.hidden_layer_sizes)

    @property
    def activations(self) -> tuple[Activation, ...]:
        return (Activation.LINEAR,) + (Activation.TANSIG,) * (len(self.sizes) - 1)


@dataclass
class NetworkState:
    topology: Topology
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    init_scheme: str = "paper"

    def __post_init__(self):
        sizes = self.topology.sizes
        if len(self.weights) != len(sizes) - 1 or len(self.biases) != len(sizes) - 1:
            raise ShapeError("need one weight matrix and one bias vector per non-input layer")
        for l, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (sizes[l + 1], sizes[l]):
                raise ShapeError(f"weights[{l}] has shape {w.shape}, expected {(sizes[l + 1], sizes[l])}")
            if b.shape != (sizes[l + 1],):
                raise ShapeError(f"biases[{l}] has shape {b.shape}, expected {(sizes[l + 1],)}")

    @classmethod
    def zeros(cls, topology: Topology) -> "NetworkState":
        s = topology.sizes
        return cls(
            topology,
            [np.zeros((s[l + 1], s[l]), dtype=DTYPE) for l in range(len(s) - 1)],
            [np.zeros(s[l + 1], dtype=DTYPE) for l in range(len(s) - 1)],
        )

    def params(self) -> list[np.ndarray]:
        """Weights and biases interleaved: ``[W0, b0, W1, b1, ...]``."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out += [w, b]
        return out

    def copy(self) -> "NetworkState":
        return NetworkState(
            self.topology,
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            self.init_scheme,
        )

    def equals(self, other: "NetworkState") -> bool:
        return self.topology == other.topology and all(
            np.array_equal(p, q) for p, q in zip(self.params(), other.params())
        )


def init_network(topology: Topology, prng: np.random.Generator, scheme: str = "paper") -> NetworkState:
    """Draw every parameter from the random source.

    Draw order is layer by layer; within a layer the weight matrix is filled
    row-major before the bias vector. ``"paper"`` draws from U[0, 1) and
    ``"symmetric"`` from U[-0.5, 0.5).
    """
    if scheme not in INIT_SCHEMES:
        raise ValueError(f"unknown init scheme {scheme!r}; choose from {INIT_SCHEMES}")
    offset = 0.5 if scheme == "symmetric" else 0.0
    sizes = topology.sizes
    weights, biases = [], []
    for l in range(len(sizes) - 1):
        rows, cols = sizes[l + 1], sizes[l]
        weights.append(prng.random(rows * cols, dtype=DTYPE).reshape(rows, cols) - offset)
        biases.append(prng.random(rows, dtype=DTYPE) - offset)
    return NetworkState(topology, weights, biases, scheme)


def forward(net: NetworkState, x) -> list[np.ndarray]:
    """Activations of every layer, input first.

    ``x`` may be a single input vector or a matrix holding one input per
    column; the returned activations have the matching shape.
    """
    x = np.asarray(x, dtype=DTYPE)
    if x.shape[0] != net.topology.input_size or x.ndim not in (1, 2):
        raise ShapeError(f"input has shape {x.shape}, expected leading size {net.topology.input_size}")
    check_finite(x, "input")
    acts = [x]
    for w, b in zip(net.weights, net.biases):
        pre = w @ acts[-1] + (b if x.ndim == 1 else b[:, None])
        acts.append(tansig(pre))
    return acts


def output_of(acts: Sequence[np.ndarray]) -> np.ndarray:
    if not acts:
        raise ValueError("no layer activations given")
    return acts[-1]


# Snapshot format
# ---------------
# bpocr-net 1
# topology <input> <hidden...> <output>
# activations linear tansig ...
# init <scheme>
# layer <l> <rows> <cols>
# <rows lines of cols weights>
# <one line of rows biases>
# ... one layer block per non-input layer ...
# end
#
# Numbers use repr() of float64, which round-trips exactly.

SNAPSHOT_MAGIC = "bpocr-net"
SNAPSHOT_VERSION = 1


class SnapshotError(ValueError):
    pass


def dumps_network(net: NetworkState) -> str:
    lines = [
        f"{SNAPSHOT_MAGIC} {SNAPSHOT_VERSION}",
        "topology " + " ".join(str(s) for s in net.topology.sizes),
        "activations " + " ".join(a.value for a in net.topology.activations),
        f"init {net.init_scheme}",
    ]
    for l, (w, b) in enumerate(zip(net.weights, net.biases)):
        lines.append(f"layer {l} {w.shape[0]} {w.shape[1]}")
        lines += [" ".join(repr(float(v)) for v in row) for row in w]
        lines.append(" ".join(repr(float(v)) for v in b))
    lines.append("end")
    return "\n".join(lines) + "\n"


def loads_network(text: str) -> NetworkState:
    lines = text.splitlines()
    pos = 0

    def take(what: str) -> list[str]:
        nonlocal pos
        if pos >= len(lines):
            raise SnapshotError(f"line {pos + 1}: unexpected end of snapshot, expected {what}")
        pos += 1
        return lines[pos - 1].split()

    def floats(tokens: list[str], n: int, what: str) -> list[float]:
        if len(tokens) != n:
            raise SnapshotError(f"line {pos}: {what} has {len(tokens)} values, expected {n}")
        try:
            return [float(t) for t in tokens]
        except ValueError as exc:
            raise SnapshotError(f"line {pos}: {what}: {exc}") from None

    head = take("header")
    if head != [SNAPSHOT_MAGIC, str(SNAPSHOT_VERSION)]:
        raise SnapshotError(f"line 1: bad header {' '.join(head)!r}")
    topo = take("topology")
    if topo[:1] != ["topology"] or len(topo) < 4:
        raise SnapshotError(f"line {pos}: malformed topology line")
    try:
        sizes = [int(t) for t in topo[1:]]
        topology = Topology(sizes[0], tuple(sizes[1:-1]), sizes[-1])
    except ValueError as exc:
        raise SnapshotError(f"line {pos}: topology: {exc}") from None
    acts = take("activations")
    if acts != ["activations"] + [a.value for a in topology.activations]:
        raise SnapshotError(f"line {pos}: activations do not match topology")
    init = take("init")
    if len(init) != 2 or init[0] != "init":
        raise SnapshotError(f"line {pos}: malformed init line")

    weights, biases = [], []
    for l in range(len(sizes) - 1):
        rows, cols = sizes[l + 1], sizes[l]
        if take(f"layer {l} header") != ["layer", str(l), str(rows), str(cols)]:
            raise SnapshotError(f"line {pos}: expected 'layer {l} {rows} {cols}'")
        w = [floats(take(f"layer {l} weight row"), cols, f"layer {l} weight row") for _ in range(rows)]
        b = floats(take(f"layer {l} biases"), rows, f"layer {l} biases")
        weights.append(np.array(w, dtype=DTYPE))
        biases.append(np.array(b, dtype=DTYPE))
    if take("end marker") != ["end"]:
        raise SnapshotError(f"line {pos}: expected 'end'")
    return NetworkState(topology, weights, biases, init[1])


def save_network(net: NetworkState, path) -> None:
    Path(path).write_text(dumps_network(net))


def load_network(path) -> NetworkState:
    return loads_network(Path(path).read_text())
