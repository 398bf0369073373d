"""Experiment protocol: depths x update rules x samples x seeds, trend checks, gradcheck."""

from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .classify import evaluate, targets_matrix
from .dataio import Dataset
from .learn import HyperParams, TrainingReport, UpdateRule, backprop, numeric_gradient, train_sample
from .network import Topology, forward, init_network
from .numcore import make_prng


def run_prng(seed: int, sample: int, depth: int) -> np.random.Generator:
    """Generator for one run: PCG64 seeded by ``SeedSequence([seed, sample, depth])``.

    The update rule is deliberately left out, so the classical and modified
    runs of one (seed, sample, depth) start from the same weights.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, sample, depth])))


@dataclass(frozen=True)
class ExperimentConfig:
    depths: tuple[int, ...] = (1, 2, 3)
    update_rules: tuple[UpdateRule, ...] = (UpdateRule.CLASSICAL, UpdateRule.MODIFIED)
    hyperparams: HyperParams = HyperParams()
    seeds: tuple[int, ...] = (0,)
    hidden_size: int = 10
    init_scheme: str = "paper"

    def __post_init__(self):
        object.__setattr__(self, "update_rules", tuple(UpdateRule(r) for r in self.update_rules))
        if not self.depths or not self.update_rules or not self.seeds:
            raise ValueError("depths, update_rules and seeds must all be non-empty")
        if min(self.depths) < 1:
            raise ValueError("depths must be >= 1")


@dataclass(frozen=True)
class ExperimentRow:
    sample: int
    depth: int
    rule: UpdateRule
    seed: int
    epochs: int
    converged: bool
    final_mse: float
    cum_grad: float
    test_accuracies: tuple[float, ...]

    @property
    def mean_accuracy(self) -> float:
        return sum(self.test_accuracies) / len(self.test_accuracies)


class ExperimentError(RuntimeError):
    pass


def run_one(
    train_x: np.ndarray,
    test_xs: Sequence[np.ndarray],
    depth: int,
    rule: UpdateRule,
    seed: int,
    cfg: ExperimentConfig,
    sample: int = 1,
) -> tuple[ExperimentRow, TrainingReport]:
    net = init_network(Topology.uniform(depth, cfg.hidden_size), run_prng(seed, sample, depth), cfg.init_scheme)
    hp = replace(cfg.hyperparams, update_rule=rule)
    report = train_sample(net, train_x, targets_matrix(), hp, seed=seed)
    accs = tuple(evaluate(net, tx).accuracy for tx in test_xs)
    row = ExperimentRow(sample, depth, rule, seed, report.epochs_run, report.converged,
                        report.final_error, report.cumulative_gradient, accs)
    return row, report


def run_experiment(
    cfg: ExperimentConfig,
    dataset: Dataset,
    on_run: Callable[[ExperimentRow, TrainingReport], None] | None = None,
) -> list[ExperimentRow]:
    """Train a fresh network for every (sample, depth, rule, seed) and test it.

    Rows come out ordered by sample, depth, rule (config order), then seed.
    """
    rows = []
    for s, train_x in enumerate(dataset.training_samples, start=1):
        for depth in cfg.depths:
            for rule in cfg.update_rules:
                for seed in cfg.seeds:
                    try:
                        row, report = run_one(train_x, dataset.test_samples, depth, rule, seed, cfg, s)
                    except Exception as exc:
                        raise ExperimentError(
                            f"run failed at sample={s} depth={depth} rule={rule.value} seed={seed}: {exc}"
                        ) from exc
                    rows.append(row)
                    if on_run is not None:
                        on_run(row, report)
    return rows


# -- rows CSV ----------------------------------------------------------------

def row_fields(n_test: int) -> list[str]:
    return ["sample", "depth", "rule", "seed", "epochs", "converged", "final_mse", "cum_grad"] + [
        f"acc_test{i}" for i in range(1, n_test + 1)
    ]


def rows_csv(rows: Sequence[ExperimentRow]) -> str:
    n_test = len(rows[0].test_accuracies) if rows else 2
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(row_fields(n_test))
    for r in rows:
        w.writerow([r.sample, r.depth, r.rule.value, r.seed, r.epochs, int(r.converged),
                    repr(r.final_mse), repr(r.cum_grad), *(repr(a) for a in r.test_accuracies)])
    return buf.getvalue()


def parse_rows_csv(text: str) -> list[ExperimentRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or header[:8] != row_fields(0):
        raise ValueError("rows CSV has an unexpected header")
    n_test = len(header) - 8
    rows = []
    for rec in reader:
        if len(rec) != len(header):
            raise ValueError(f"rows CSV line {reader.line_num}: expected {len(header)} fields")
        rows.append(ExperimentRow(int(rec[0]), int(rec[1]), UpdateRule(rec[2]), int(rec[3]), int(rec[4]),
                                  rec[5] == "1", float(rec[6]), float(rec[7]),
                                  tuple(float(a) for a in rec[8:8 + n_test])))
    return rows


# -- trends ------------------------------------------------------------------

@dataclass(frozen=True)
class CellStats:
    runs: int
    converged: int
    median_epochs: float
    median_epochs_to_converge: float  # inf when the median run did not converge
    median_final_mse: float
    median_cum_grad: float
    median_accuracy: float


@dataclass
class TrendSummary:
    """Per-(depth, rule) medians and the trend flags derived from them.

    Flags are True/False, or None when not evaluable (fewer than two depths,
    a missing rule, or an epochs median that is censored because too few runs
    converged).
    """

    cells: dict[tuple[int, UpdateRule], CellStats]
    flags: dict[str, bool | None] = field(default_factory=dict)

    def format(self) -> str:
        lines = ["depth rule       runs conv med_epochs med_to_conv med_final_mse med_cum_grad med_acc"]
        for (depth, rule), c in sorted(self.cells.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
            lines.append(
                f"{depth:5d} {rule.value:10s} {c.runs:4d} {c.converged:4d} {c.median_epochs:10.1f} "
                f"{c.median_epochs_to_converge:11.1f} {c.median_final_mse:13.6g} {c.median_cum_grad:12.6g} "
                f"{c.median_accuracy:7.4f}"
            )
        lines.append("")
        for name, value in self.flags.items():
            lines.append(f"{name}: {'not-evaluable' if value is None else 'pass' if value else 'fail'}")
        return "\n".join(lines) + "\n"


def _nondecreasing(xs: Sequence[float]) -> bool:
    return all(a <= b for a, b in zip(xs, xs[1:]))


def _nonincreasing(xs: Sequence[float]) -> bool:
    return all(a >= b for a, b in zip(xs, xs[1:]))


def _all_or_none(values: list[bool | None]) -> bool | None:
    if not values or any(v is None for v in values):
        return None
    return all(values)


def summarize_trends(rows: Sequence[ExperimentRow]) -> TrendSummary:
    groups: dict[tuple[int, UpdateRule], list[ExperimentRow]] = {}
    for r in rows:
        groups.setdefault((r.depth, r.rule), []).append(r)
    cells = {}
    for key, rs in groups.items():
        to_conv = [r.epochs if r.converged else math.inf for r in rs]
        cells[key] = CellStats(
            runs=len(rs),
            converged=sum(r.converged for r in rs),
            median_epochs=statistics.median(r.epochs for r in rs),
            median_epochs_to_converge=statistics.median(to_conv),
            median_final_mse=statistics.median(r.final_mse for r in rs),
            median_cum_grad=statistics.median(r.cum_grad for r in rs),
            median_accuracy=statistics.median(r.mean_accuracy for r in rs),
        )

    depths = sorted({d for d, _ in cells})
    rules = sorted({r for _, r in cells}, key=lambda r: r.value)
    flags: dict[str, bool | None] = {}

    def per_rule(check: Callable[[list[CellStats]], bool | None]) -> bool | None:
        if len(depths) < 2:
            return None
        out = []
        for rule in rules:
            cs = [cells.get((d, rule)) for d in depths]
            out.append(None if any(c is None for c in cs) else check(cs))
        return _all_or_none(out)

    def epochs_trend(cs: list[CellStats]) -> bool | None:
        meds = [c.median_epochs_to_converge for c in cs]
        return None if any(math.isinf(m) for m in meds) else _nondecreasing(meds)

    flags["epochs_nondecreasing_with_depth"] = per_rule(epochs_trend)
    flags["mse_nonincreasing_with_depth"] = per_rule(lambda cs: _nonincreasing([c.median_final_mse for c in cs]))

    def per_depth(check: Callable[[CellStats, CellStats], bool | None]) -> bool | None:
        out = []
        for d in depths:
            mod, cls = cells.get((d, UpdateRule.MODIFIED)), cells.get((d, UpdateRule.CLASSICAL))
            if mod is None or cls is None:
                return None
            out.append(check(mod, cls))
        return _all_or_none(out)

    def faster(mod: CellStats, cls: CellStats) -> bool | None:
        a, b = mod.median_epochs_to_converge, cls.median_epochs_to_converge
        if math.isinf(a) or math.isinf(b):
            return None
        return a <= b

    flags["modified_faster"] = per_depth(faster)
    flags["modified_more_accurate"] = per_depth(lambda m, c: m.median_accuracy >= c.median_accuracy)
    return TrendSummary(cells, flags)


# -- gradient check ----------------------------------------------------------

@dataclass(frozen=True)
class GradcheckReport:
    max_rel_error: float
    layer: int
    kind: str  # "weight" or "bias"
    row: int
    col: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_rel_error <= self.tolerance

    def __str__(self) -> str:
        where = f"layer {self.layer} {self.kind} [{self.row}, {self.col}]"
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} max relative error {self.max_rel_error:.3e} at {where} (tolerance {self.tolerance:g})"


def relative_errors(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-8) -> np.ndarray:
    return np.abs(analytic - numeric) / np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)


def gradcheck(
    topology: Topology,
    seed: int = 0,
    tolerance: float = 1e-5,
    step: float = 1e-5,
    init_scheme: str = "symmetric",
    corrupt_layer: int | None = None,
) -> GradcheckReport:
    """Compare back-propagated gradients with central differences on one random pattern.

    ``corrupt_layer`` flips the sign of that layer's analytic weight gradient;
    it exists to prove the check can fail.
    """
    prng = make_prng(seed)
    net = init_network(topology, prng, init_scheme)
    x = (prng.random(topology.input_size) < 0.5).astype(float)
    t = np.zeros(topology.output_size)
    t[int(prng.integers(topology.output_size))] = 1.0

    analytic = backprop(net, forward(net, x), t)
    if corrupt_layer is not None:
        analytic.weights[corrupt_layer] = -analytic.weights[corrupt_layer]
    numeric = numeric_gradient(net, x, t, step)

    worst = (-1.0, 0, "weight", 0, 0)
    for l in range(len(net.weights)):
        for kind, a, n in (("weight", analytic.weights[l], numeric.weights[l]),
                           ("bias", analytic.biases[l], numeric.biases[l])):
            err = relative_errors(a, n)
            i = int(np.argmax(err))
            if err.flat[i] > worst[0]:
                idx = np.unravel_index(i, err.shape)
                worst = (float(err.flat[i]), l, kind, int(idx[0]), int(idx[1]) if len(idx) > 1 else 0)
    return GradcheckReport(worst[0], worst[1], worst[2], worst[3], worst[4], tolerance)
