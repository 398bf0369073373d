"""Reading and writing images, glyphs, samples, datasets and training reports."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classify import LETTERS
from .learn import HyperParams, TrainingReport
from .preprocess import (
    GLYPH_COLS,
    GLYPH_ROWS,
    BinaryGlyph,
    PreprocessConfig,
    assemble_sample,
    bundled_glyphs,
    image_to_glyph,
    noise_perturb,
    sample_glyphs,
)


class ParseError(ValueError):
    pass


# -- PGM ---------------------------------------------------------------------

def parse_pgm(data: bytes) -> np.ndarray:
    """Decode a P2 (ASCII) or P5 (binary) graymap into intensities in [0, 1]."""
    pos = 0

    def token() -> tuple[bytes, int]:
        nonlocal pos
        while pos < len(data):
            if data[pos:pos + 1] == b"#":
                while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            elif data[pos:pos + 1].isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise ParseError(f"byte {start}: unexpected end of file")
        return data[start:pos], start

    def integer(what: str) -> int:
        tok, at = token()
        if not tok.isdigit():
            raise ParseError(f"byte {at}: bad {what} {tok[:16]!r}")
        return int(tok)

    magic, _ = token()
    if magic not in (b"P2", b"P5"):
        raise ParseError(f"byte 0: bad magic {magic[:8]!r}, expected P2 or P5")
    width = integer("width")
    height = integer("height")
    maxval = integer("maxval")
    if width < 1 or height < 1:
        raise ParseError(f"byte {pos}: image dimensions must be positive, got {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise ParseError(f"byte {pos}: maxval {maxval} outside 1..65535")
    count = width * height

    if magic == b"P2":
        values = []
        for _ in range(count):
            values.append(integer("pixel value"))
        pixels = np.array(values, dtype=np.int64)
    else:
        pos += 1  # single whitespace byte after maxval
        itemsize = 1 if maxval < 256 else 2
        body = data[pos:pos + count * itemsize]
        if len(body) < count * itemsize:
            raise ParseError(
                f"byte {pos + len(body)}: pixel data truncated, "
                f"need {count * itemsize} bytes, found {len(body)}"
            )
        pixels = np.frombuffer(body, dtype=np.uint8 if itemsize == 1 else ">u2").astype(np.int64)
    if pixels.max(initial=0) > maxval:
        raise ParseError(f"pixel value exceeds maxval {maxval}")
    return (pixels / maxval).reshape(height, width)


def load_pgm(path) -> np.ndarray:
    try:
        return parse_pgm(Path(path).read_bytes())
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def write_pgm(path, image, binary: bool = False, maxval: int = 255) -> None:
    img = np.asarray(image, dtype=float)
    if img.ndim != 2 or img.min() < 0 or img.max() > 1:
        raise ValueError("image must be 2-D with intensities in [0, 1]")
    px = np.rint(img * maxval).astype(int)
    h, w = px.shape
    if binary:
        if maxval > 255:
            raise ValueError("binary output supports maxval <= 255 only")
        Path(path).write_bytes(f"P5\n{w} {h}\n{maxval}\n".encode() + px.astype(np.uint8).tobytes())
    else:
        rows = "\n".join(" ".join(str(v) for v in row) for row in px)
        Path(path).write_text(f"P2\n{w} {h}\n{maxval}\n{rows}\n")


# -- glyphs and samples ------------------------------------------------------

def format_glyph(glyph: BinaryGlyph) -> str:
    rows = ["".join(str(int(v)) for v in row) for row in glyph.grid]
    return f"label: {glyph.label}\n" + "\n".join(rows) + "\n"


def parse_glyph(text: str, source: str = "<glyph>") -> BinaryGlyph:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("label:"):
        raise ParseError(f"{source}:1: expected 'label: <A-Z>'")
    label = lines[0][len("label:"):].strip()
    if len(label) != 1 or label not in LETTERS:
        raise ParseError(f"{source}:1: bad label {label!r}")
    rows = lines[1:]
    while rows and not rows[-1].strip():
        rows.pop()
    if len(rows) != GLYPH_ROWS:
        raise ParseError(f"{source}: expected {GLYPH_ROWS} bitmap rows, found {len(rows)}")
    for i, row in enumerate(rows, start=2):
        if len(row) != GLYPH_COLS or set(row) - {"0", "1"}:
            raise ParseError(f"{source}:{i}: expected {GLYPH_COLS} characters from {{0,1}}, got {row!r}")
    return BinaryGlyph(np.array([[int(ch) for ch in row] for row in rows]), label)


def write_glyph(glyph: BinaryGlyph, path) -> None:
    Path(path).write_text(format_glyph(glyph))


def read_glyph(path) -> BinaryGlyph:
    return parse_glyph(Path(path).read_text(), str(path))


def write_sample_dir(sample, directory) -> None:
    """Write a 48 x 26 sample as ``A.glyph`` ... ``Z.glyph``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for g in sample_glyphs(sample):
        write_glyph(g, d / f"{g.label}.glyph")


def load_sample_dir(directory, cfg: PreprocessConfig = PreprocessConfig()) -> np.ndarray:
    """Build a sample from ``<letter>.glyph`` or ``<letter>.pgm`` files.

    A glyph file wins over a PGM of the same letter. PGMs go through
    binarize -> downsample. The glyph label must match its file name.
    """
    d = Path(directory)
    if not d.is_dir():
        raise FileNotFoundError(f"sample directory not found: {d}")
    glyphs = []
    missing = []
    for letter in LETTERS:
        gpath, ppath = d / f"{letter}.glyph", d / f"{letter}.pgm"
        if gpath.exists():
            g = read_glyph(gpath)
            if g.label != letter:
                raise ParseError(f"{gpath}: label {g.label} does not match file name")
        elif ppath.exists():
            g = image_to_glyph(load_pgm(ppath), letter, cfg)
        else:
            missing.append(letter)
            continue
        glyphs.append(g)
    if missing:
        raise ValueError(f"{d}: missing glyph for letter(s) {', '.join(missing)}")
    return assemble_sample(glyphs)


# -- bundled dataset ---------------------------------------------------------

@dataclass
class Dataset:
    training_samples: list[np.ndarray]
    test_samples: list[np.ndarray]
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        for s in self.training_samples + self.test_samples:
            sample_glyphs(s)  # validates shape and binary entries


def bundled_dataset(prng: np.random.Generator, n_train: int = 5, n_test: int = 2, flip_prob: float = 0.05) -> Dataset:
    """Clean bundled font as training sample 1, noisy copies for the rest.

    Noise is drawn in order: training samples 2..n_train, then test samples
    1..n_test, letters A to Z within each sample.
    """
    if n_train < 1 or n_test < 1:
        raise ValueError("need at least one training and one test sample")
    clean = bundled_glyphs()

    def noisy() -> np.ndarray:
        return assemble_sample(noise_perturb(g, flip_prob, prng) for g in clean)

    train = [assemble_sample(clean)] + [noisy() for _ in range(n_train - 1)]
    test = [noisy() for _ in range(n_test)]
    return Dataset(train, test, {"source": "bundled", "flip_prob": flip_prob})


def load_dataset(train_dirs, test_dirs, cfg: PreprocessConfig = PreprocessConfig()) -> Dataset:
    return Dataset(
        [load_sample_dir(d, cfg) for d in train_dirs],
        [load_sample_dir(d, cfg) for d in test_dirs],
        {"source": "files", "train": [str(d) for d in train_dirs], "test": [str(d) for d in test_dirs]},
    )


# -- training reports --------------------------------------------------------

EPOCH_FIELDS = ("epoch", "mse", "e_sum", "grad_norm")


def epoch_csv(report: TrainingReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(EPOCH_FIELDS)
    for i, (m, e, g) in enumerate(zip(report.mse_trace, report.e_trace, report.grad_norms), start=1):
        w.writerow([i, repr(m), repr(e), repr(g)])
    return buf.getvalue()


def parse_epoch_csv(text: str) -> tuple[list[float], list[float], list[float]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != EPOCH_FIELDS:
        raise ParseError(f"epoch CSV header must be {','.join(EPOCH_FIELDS)}")
    mse_t, e_t, g_t = [], [], []
    for n, row in enumerate(rows[1:], start=1):
        if len(row) != 4 or row[0] != str(n):
            raise ParseError(f"epoch CSV line {n + 1}: malformed row {row}")
        mse_t.append(float(row[1]))
        e_t.append(float(row[2]))
        g_t.append(float(row[3]))
    return mse_t, e_t, g_t


def report_to_dict(report: TrainingReport) -> dict:
    return {
        "epochs_run": report.epochs_run,
        "converged": report.converged,
        "final_error": report.final_error if report.mse_trace else None,
        "cumulative_gradient": report.cumulative_gradient,
        "hyperparams": report.hyperparams.as_dict(),
        "seed": report.seed,
        "init_scheme": report.init_scheme,
        "depth": report.depth,
        "extra": report.extra,
        "mse_trace": report.mse_trace,
        "e_trace": report.e_trace,
        "grad_norms": report.grad_norms,
    }


def report_from_dict(d: dict) -> TrainingReport:
    return TrainingReport(
        epochs_run=d["epochs_run"],
        converged=d["converged"],
        mse_trace=list(d["mse_trace"]),
        e_trace=list(d["e_trace"]),
        grad_norms=list(d["grad_norms"]),
        hyperparams=HyperParams(**d["hyperparams"]),
        seed=d["seed"],
        init_scheme=d["init_scheme"],
        depth=d["depth"],
        extra=d.get("extra", {}),
    )


def write_report(report: TrainingReport, path, fmt: str = "json") -> None:
    """Serialize a report. ``csv`` writes the epoch trace only; ``json`` everything."""
    if fmt == "csv":
        text = epoch_csv(report)
    elif fmt == "json":
        text = json.dumps(report_to_dict(report), indent=2) + "\n"
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    Path(path).write_text(text)


def read_report(path) -> TrainingReport:
    return report_from_dict(json.loads(Path(path).read_text()))


def read_epoch_csv(path) -> tuple[list[float], list[float], list[float]]:
    return parse_epoch_csv(Path(path).read_text())
