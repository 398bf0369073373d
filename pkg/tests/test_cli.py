import subprocess
import sys

import numpy as np
import pytest

from bpocr.cli import main
from bpocr.dataio import write_pgm
from bpocr.harness import parse_rows_csv
from bpocr.network import load_network
from bpocr.preprocess import bundled_glyphs


def test_unknown_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["fly"])
    assert exc.value.code != 0
    assert "usage" in capsys.readouterr().err


def test_unknown_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["train", "--turbo"])
    assert exc.value.code != 0


def test_train_outputs(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["train", "--max-epochs", "20", "--init", "symmetric", "--out", str(out)]) == 0
    assert (out / "epochs.csv").read_text().startswith("epoch,mse,e_sum,grad_norm\n")
    assert len((out / "epochs.csv").read_text().splitlines()) == 21
    assert load_network(out / "net.snapshot").topology.sizes == (48, 10, 26)
    assert "did not converge after 20 epochs" in capsys.readouterr().out


def test_train_beta_zero_reduction(tmp_path):
    common = ["train", "--beta", "0", "--max-epochs", "150", "--hidden-layers", "2", "--seed", "5", "--init", "symmetric"]
    assert main(common + ["--update", "modified", "--out", str(tmp_path / "m")]) == 0
    assert main(common + ["--update", "classical", "--out", str(tmp_path / "c")]) == 0
    assert (tmp_path / "m" / "epochs.csv").read_bytes() == (tmp_path / "c" / "epochs.csv").read_bytes()
    assert (tmp_path / "m" / "net.snapshot").read_bytes() == (tmp_path / "c" / "net.snapshot").read_bytes()


def test_eval_after_convergence_scores_100(tmp_path, capsys):
    # 40 hidden units: wide enough for the clean font to reach the 0.001 goal
    out = tmp_path / "run"
    main(["train", "--hidden-size", "40", "--init", "symmetric", "--update", "classical", "--seed", "0", "--out", str(out)])
    assert "converged after" in capsys.readouterr().out
    assert main(["eval", "--net", str(out / "net.snapshot")]) == 0
    assert "26 (100.00%)" in capsys.readouterr().out
    assert main(["eval", "--net", str(out / "net.snapshot"), "--bundled-test", "2", "-v"]) == 0
    assert "correctly recognized" in capsys.readouterr().out


def test_experiment_row_count_and_determinism(tmp_path):
    args = ["experiment", "-q", "--max-epochs", "15", "--seeds", "0,1"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "rows.csv").read_bytes()
    assert a == (tmp_path / "b" / "rows.csv").read_bytes()
    assert len(parse_rows_csv(a.decode())) == 5 * 3 * 2 * 2
    assert (tmp_path / "a" / "trends.txt").read_bytes() == (tmp_path / "b" / "trends.txt").read_bytes()
    assert len(list((tmp_path / "a" / "curves").glob("*.csv"))) == 60


def test_gradcheck_exit_codes(capsys):
    assert main(["gradcheck"]) == 0
    assert main(["gradcheck", "--hidden-layers", "3"]) == 0
    assert main(["gradcheck", "--corrupt-layer", "1"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_preprocess_and_train_from_dir(tmp_path, capsys):
    pgms = tmp_path / "pgm"
    pgms.mkdir()
    for g in bundled_glyphs():
        write_pgm(pgms / f"{g.label}.pgm", np.where(np.kron(g.grid, np.ones((6, 5))) > 0, 0.0, 1.0))
    assert main(["preprocess", "--input", str(pgms), "--output", str(tmp_path / "glyphs")]) == 0
    assert len(list((tmp_path / "glyphs").glob("*.glyph"))) == 26
    assert main(["train", "--sample", str(tmp_path / "glyphs"), "--max-epochs", "3", "--out", str(tmp_path / "r")]) == 0


def test_missing_input_is_diagnosed(tmp_path, capsys):
    assert main(["preprocess", "--input", str(tmp_path), "--output", str(tmp_path / "o")]) == 2
    assert "missing image for letter A" in capsys.readouterr().err
    assert main(["eval", "--net", str(tmp_path / "nope")]) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "bpocr", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "bpocr" in res.stdout
