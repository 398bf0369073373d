"""Back-propagation, the momentum update rules and the batch training loop.

Gradients are stored as error-*reducing* directions, i.e. ``-dE/dparam``,
so an update always adds ``eta * grad``. With ``E = 0.5 * sum((t - y)**2)``
the output delta is ``(t - y) * (1 - y**2)``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .network import NetworkState, forward
from .numcore import DTYPE, ShapeError, tansig_deriv_from_output


class UpdateRule(str, Enum):
    CLASSICAL = "classical"
    MODIFIED = "modified"


@dataclass(frozen=True)
class HyperParams:
    eta: float = 0.01
    alpha: float = 0.90
    beta: float = 0.05
    mse_goal: float = 0.001
    max_epochs: int = 2000
    update_rule: UpdateRule = UpdateRule.MODIFIED

    def __post_init__(self):
        object.__setattr__(self, "update_rule", UpdateRule(self.update_rule))
        if not self.eta > 0:
            raise ValueError("eta must be > 0")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be >= 0")
        if not self.mse_goal > 0:
            raise ValueError("mse_goal must be > 0")
        if int(self.max_epochs) != self.max_epochs or self.max_epochs < 1:
            raise ValueError("max_epochs must be an integer >= 1")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["update_rule"] = self.update_rule.value
        return d


@dataclass
class GradientSet:
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    deltas: list[np.ndarray]

    def params(self) -> list[np.ndarray]:
        out = []
        for w, b in zip(self.weights, self.biases):
            out += [w, b]
        return out

    def norm(self) -> float:
        """L2 norm of all weight and bias gradients stacked into one vector."""
        return float(np.sqrt(sum(float(np.sum(g * g)) for g in self.params())))


@dataclass
class DeltaHistory:
    """The last two applied parameter changes, in ``NetworkState.params()`` order."""

    prev: list[np.ndarray]
    prev2: list[np.ndarray]

    @classmethod
    def zeros_like(cls, net: NetworkState) -> "DeltaHistory":
        return cls([np.zeros_like(p) for p in net.params()], [np.zeros_like(p) for p in net.params()])


def lms_error(t, y) -> float:
    """``0.5 * sum((t - y)**2)`` over all entries."""
    t = np.asarray(t, dtype=DTYPE)
    y = np.asarray(y, dtype=DTYPE)
    if t.shape != y.shape:
        raise ShapeError(f"target shape {t.shape} != output shape {y.shape}")
    return 0.5 * float(np.sum((t - y) ** 2))


def mse(sq_error_sum: float, n_patterns: int, n_outputs: int) -> float:
    """Squared error sum normalized per pattern and per output unit."""
    if n_patterns < 1 or n_outputs < 1:
        raise ValueError("pattern and output counts must be >= 1")
    return sq_error_sum / (n_patterns * n_outputs)


def backprop(net: NetworkState, acts: list[np.ndarray], t) -> GradientSet:
    """Error-reducing gradients for one pattern, or summed over a batch.

    ``acts`` comes from :func:`forward`; when it holds a batch (one pattern per
    column) ``t`` must have the same layout and the returned weight and bias
    gradients are sums over the batch. Deltas keep one column per pattern.
    """
    t = np.asarray(t, dtype=DTYPE)
    y = acts[-1]
    if t.shape != y.shape or len(acts) != len(net.weights) + 1:
        raise ShapeError(f"target shape {t.shape} does not match output shape {y.shape}")
    batched = y.ndim == 2

    delta = (t - y) * tansig_deriv_from_output(y)
    deltas = [delta]
    for l in range(len(net.weights) - 1, 0, -1):
        delta = (net.weights[l].T @ delta) * tansig_deriv_from_output(acts[l])
        deltas.append(delta)
    deltas.reverse()

    if batched:
        gw = [d @ a.T for d, a in zip(deltas, acts[:-1])]
        gb = [d.sum(axis=1) for d in deltas]
    else:
        gw = [np.outer(d, a) for d, a in zip(deltas, acts[:-1])]
        gb = [d.copy() for d in deltas]
    return GradientSet(gw, gb, deltas)


def numeric_gradient(net: NetworkState, x, t, step: float = 1e-5) -> GradientSet:
    """Central finite-difference estimate of ``-dE/dparam`` (slow; for checks)."""
    work = net.copy()
    x = np.asarray(x, dtype=DTYPE)
    t = np.asarray(t, dtype=DTYPE)

    def err() -> float:
        return lms_error(t, forward(work, x)[-1])

    grads = []
    for p in work.params():
        g = np.empty_like(p)
        flat, gflat = p.reshape(-1), g.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + step
            up = err()
            flat[i] = orig - step
            down = err()
            flat[i] = orig
            gflat[i] = -(up - down) / (2 * step)
        grads.append(g)
    return GradientSet(grads[0::2], grads[1::2], [])


def apply_update(net: NetworkState, grad: GradientSet, hist: DeltaHistory, hp: HyperParams) -> list[np.ndarray]:
    """Add the momentum step to every parameter in place and shift ``hist``.

    classical: change = eta*grad + alpha*prev
    modified:  change = eta*grad + alpha*prev + beta*prev2
    """
    changes = []
    for p, g, prev, prev2 in zip(net.params(), grad.params(), hist.prev, hist.prev2):
        change = hp.eta * g + hp.alpha * prev
        if hp.update_rule is UpdateRule.MODIFIED:
            change = change + hp.beta * prev2
        p += change
        changes.append(change)
    hist.prev2, hist.prev = hist.prev, changes
    return changes


@dataclass
class TrainingReport:
    epochs_run: int
    converged: bool
    mse_trace: list[float]
    e_trace: list[float]
    grad_norms: list[float]
    hyperparams: HyperParams
    seed: int | None = None
    init_scheme: str = "paper"
    depth: int = 1
    extra: dict = field(default_factory=dict)

    @property
    def final_error(self) -> float:
        return self.mse_trace[-1] if self.mse_trace else float("nan")

    @property
    def cumulative_gradient(self) -> float:
        return float(sum(self.grad_norms))


def gradient_metric(report: TrainingReport) -> float:
    """Sum over epochs of the stacked-gradient L2 norm. Relative use only."""
    return report.cumulative_gradient


GradientFn = Callable[[NetworkState, np.ndarray, np.ndarray], GradientSet]


def train_sample(
    net: NetworkState,
    inputs,
    targets,
    hp: HyperParams,
    *,
    seed: int | None = None,
    gradient_fn: GradientFn | None = None,
    on_epoch: Callable[[int, NetworkState], None] | None = None,
) -> TrainingReport:
    """Batch-train ``net`` in place on one sample.

    ``inputs`` holds one pattern per column (48 x 26 for a letter sample) and
    ``targets`` the matching one-hot columns. Each epoch measures the error at
    the current parameters, sums the gradient over all patterns and applies a
    single update. Training stops once the epoch MSE is at or below
    ``hp.mse_goal`` or after ``hp.max_epochs`` epochs.
    """
    x = np.asarray(inputs, dtype=DTYPE)
    t = np.asarray(targets, dtype=DTYPE)
    topo = net.topology
    if x.ndim != 2 or x.shape[0] != topo.input_size:
        raise ShapeError(f"inputs have shape {x.shape}, expected ({topo.input_size}, P)")
    if t.shape != (topo.output_size, x.shape[1]):
        raise ShapeError(f"targets have shape {t.shape}, expected {(topo.output_size, x.shape[1])}")

    hist = DeltaHistory.zeros_like(net)
    n_patterns = x.shape[1]
    mse_trace, e_trace, grad_norms = [], [], []
    converged = False
    for epoch in range(1, hp.max_epochs + 1):
        acts = forward(net, x)
        sq = float(np.sum((t - acts[-1]) ** 2))
        grad = backprop(net, acts, t) if gradient_fn is None else gradient_fn(net, x, t)
        apply_update(net, grad, hist, hp)
        mse_trace.append(mse(sq, n_patterns, topo.output_size))
        e_trace.append(0.5 * sq)
        grad_norms.append(grad.norm())
        if on_epoch is not None:
            on_epoch(epoch, net)
        if mse_trace[-1] <= hp.mse_goal:
            converged = True
            break
    return TrainingReport(
        epochs_run=len(mse_trace),
        converged=converged,
        mse_trace=mse_trace,
        e_trace=e_trace,
        grad_norms=grad_norms,
        hyperparams=hp,
        seed=seed,
        init_scheme=net.init_scheme,
        depth=topo.depth,
    )
