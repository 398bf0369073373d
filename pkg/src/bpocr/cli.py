"""Command line entry point: ``bpocr {train,eval,experiment,gradcheck,preprocess}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .classify import LETTERS, evaluate, targets_matrix
from .dataio import (
    bundled_dataset,
    epoch_csv,
    load_dataset,
    load_pgm,
    load_sample_dir,
    write_glyph,
    write_report,
)
from .harness import ExperimentConfig, gradcheck, rows_csv, run_experiment, summarize_trends
from .learn import HyperParams, UpdateRule, train_sample
from .network import Topology, init_network, load_network, save_network
from .numcore import make_prng
from .preprocess import PreprocessConfig, assemble_sample, bundled_glyphs, image_to_glyph

DEFAULT_DATA_SEED = 2011


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _add_network_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hidden-layers", type=int, default=1, help="number of hidden layers (default 1)")
    p.add_argument("--hidden-size", type=int, default=10, help="units per hidden layer (default 10)")
    p.add_argument("--init", choices=("paper", "symmetric"), default="paper",
                   help="paper: U[0,1); symmetric: U[-0.5,0.5)")
    p.add_argument("--seed", type=int, default=0)


def _add_training_args(p: argparse.ArgumentParser) -> None:
    d = HyperParams()
    p.add_argument("--eta", type=float, default=d.eta)
    p.add_argument("--alpha", type=float, default=d.alpha)
    p.add_argument("--beta", type=float, default=d.beta)
    p.add_argument("--mse-goal", type=float, default=d.mse_goal)
    p.add_argument("--max-epochs", type=int, default=d.max_epochs)
    p.add_argument("--update", choices=[r.value for r in UpdateRule], default=d.update_rule.value)


def _hyperparams(args) -> HyperParams:
    return HyperParams(args.eta, args.alpha, args.beta, args.mse_goal, args.max_epochs, UpdateRule(args.update))


def _sample(args):
    if args.sample:
        return load_sample_dir(args.sample, PreprocessConfig(args.threshold))
    return assemble_sample(bundled_glyphs())


def cmd_train(args) -> int:
    hp = _hyperparams(args)
    x = _sample(args)
    net = init_network(Topology.uniform(args.hidden_layers, args.hidden_size), make_prng(args.seed), args.init)
    report = train_sample(net, x, targets_matrix(), hp, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_report(report, out / "report.json", "json")
    write_report(report, out / "epochs.csv", "csv")
    save_network(net, out / "net.snapshot")
    status = "converged" if report.converged else "did not converge"
    print(f"{status} after {report.epochs_run} epochs; final MSE {report.final_error:.6g}; "
          f"cumulative gradient {report.cumulative_gradient:.6g}")
    print(f"self-test on training sample: {evaluate(net, x)}")
    print(f"wrote {out / 'report.json'}, {out / 'epochs.csv'}, {out / 'net.snapshot'}")
    return 0


def cmd_eval(args) -> int:
    net = load_network(args.net)
    if args.bundled_test:
        ds = bundled_dataset(make_prng(args.data_seed), 1, args.bundled_test, args.flip)
        x = ds.test_samples[args.bundled_test - 1]
    else:
        x = _sample(args)
    result = evaluate(net, x)
    print(f"correctly recognized: {result}")
    if args.verbose:
        for letter, pred in zip(LETTERS, result.predicted):
            print(f"  {letter} -> {pred}{'' if letter == pred else '  (wrong)'}")
    return 0


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig(
        depths=tuple(args.depths),
        update_rules=tuple(UpdateRule(r) for r in args.rules.split(",")),
        hyperparams=_hyperparams(args),
        seeds=tuple(args.seeds),
        hidden_size=args.hidden_size,
        init_scheme=args.init,
    )
    if args.train_dir:
        if not args.test_dir:
            raise ValueError("--train-dir needs at least one --test-dir")
        dataset = load_dataset(args.train_dir, args.test_dir, PreprocessConfig(args.threshold))
    else:
        dataset = bundled_dataset(make_prng(args.data_seed), args.n_train, args.n_test, args.flip)

    out = Path(args.out)
    curves = out / "curves"
    curves.mkdir(parents=True, exist_ok=True)

    def save_curve(row, report):
        name = f"sample{row.sample}_depth{row.depth}_{row.rule.value}_seed{row.seed}.csv"
        (curves / name).write_text(epoch_csv(report))
        if not args.quiet:
            print(f"sample {row.sample} depth {row.depth} {row.rule.value:9s} seed {row.seed}: "
                  f"epochs {row.epochs:4d} {'conv' if row.converged else '----'} mse {row.final_mse:.5g} "
                  f"acc {' '.join(f'{a:.3f}' for a in row.test_accuracies)}", flush=True)

    rows = run_experiment(cfg, dataset, on_run=save_curve)
    summary = summarize_trends(rows)
    (out / "rows.csv").write_text(rows_csv(rows))
    (out / "trends.txt").write_text(summary.format())
    print(summary.format(), end="")
    print(f"wrote {len(rows)} rows to {out / 'rows.csv'}")
    return 0


def cmd_gradcheck(args) -> int:
    topo = Topology.uniform(args.hidden_layers, args.hidden_size)
    report = gradcheck(topo, args.seed, args.tolerance, corrupt_layer=args.corrupt_layer)
    print(report)
    return 0 if report.passed else 1


def cmd_preprocess(args) -> int:
    src, dst = Path(args.input), Path(args.output)
    cfg = PreprocessConfig(args.threshold)
    glyphs = []
    for letter in LETTERS:
        pgm = src / f"{letter}.pgm"
        if not pgm.exists():
            raise FileNotFoundError(f"missing image for letter {letter}: {pgm}")
        glyphs.append(image_to_glyph(load_pgm(pgm), letter, cfg))
    assemble_sample(glyphs)
    dst.mkdir(parents=True, exist_ok=True)
    for g in glyphs:
        write_glyph(g, dst / f"{g.label}.glyph")
    print(f"wrote 26 glyph files to {dst}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bpocr", description="Back-propagation letter recognizer with momentum variants")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one network on one sample")
    _add_network_args(p)
    _add_training_args(p)
    p.add_argument("--sample", help="directory of A..Z .glyph/.pgm files (default: bundled clean font)")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", default="run", help="output directory (default ./run)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score a saved network on a sample")
    p.add_argument("--net", required=True, help="network snapshot file")
    p.add_argument("--sample", help="directory of A..Z .glyph/.pgm files (default: bundled clean font)")
    p.add_argument("--bundled-test", type=int, metavar="N", help="use the N-th bundled noisy test sample instead")
    p.add_argument("--data-seed", type=int, default=DEFAULT_DATA_SEED)
    p.add_argument("--flip", type=float, default=0.05)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("experiment", help="run the depth x update-rule protocol")
    p.add_argument("--depths", type=_int_list, default=[1, 2, 3], help="comma list (default 1,2,3)")
    p.add_argument("--rules", default="classical,modified")
    p.add_argument("--seeds", type=_int_list, default=[0], help="comma list (default 0)")
    p.add_argument("--hidden-size", type=int, default=10)
    p.add_argument("--init", choices=("paper", "symmetric"), default="paper")
    _add_training_args(p)
    p.add_argument("--n-train", type=int, default=5)
    p.add_argument("--n-test", type=int, default=2)
    p.add_argument("--flip", type=float, default=0.05, help="noise flip probability for bundled variants")
    p.add_argument("--data-seed", type=int, default=DEFAULT_DATA_SEED)
    p.add_argument("--train-dir", action="append", help="training sample directory (repeatable)")
    p.add_argument("--test-dir", action="append", help="test sample directory (repeatable)")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", default="experiment")
    p.add_argument("-q", "--quiet", action="store_true")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("gradcheck", help="compare backprop with finite differences")
    p.add_argument("--hidden-layers", type=int, default=1)
    p.add_argument("--hidden-size", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-5)
    p.add_argument("--corrupt-layer", type=int, default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("preprocess", help="turn a directory of A..Z .pgm images into glyph files")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_preprocess)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"bpocr {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
