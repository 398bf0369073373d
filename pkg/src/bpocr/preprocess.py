"""Grayscale -> binary -> 8x6 -> 48-vector character pipeline.

Ink is 1, background is 0. Grayscale intensities are normalized to [0, 1]
with 0 = black.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .classify import LETTERS, letter_index

GLYPH_ROWS, GLYPH_COLS = 8, 6
GLYPH_SIZE = GLYPH_ROWS * GLYPH_COLS


@dataclass(frozen=True)
class PreprocessConfig:
    threshold: float = 0.5

    def __post_init__(self):
        if not 0 < self.threshold < 1:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")


@dataclass(frozen=True, eq=False)
class BinaryGlyph:
    grid: np.ndarray
    label: str

    def __post_init__(self):
        grid = np.asarray(self.grid)
        if grid.shape != (GLYPH_ROWS, GLYPH_COLS):
            raise ValueError(f"glyph must be {GLYPH_ROWS}x{GLYPH_COLS}, got {grid.shape}")
        if not np.isin(grid, (0, 1)).all():
            raise ValueError("glyph cells must be 0 or 1")
        letter_index(self.label)
        grid = grid.astype(np.uint8)
        grid.flags.writeable = False
        object.__setattr__(self, "grid", grid)

    def __eq__(self, other):
        if not isinstance(other, BinaryGlyph):
            return NotImplemented
        return self.label == other.label and np.array_equal(self.grid, other.grid)

    def __hash__(self):
        return hash((self.label, self.grid.tobytes()))

    @classmethod
    def from_rows(cls, rows: Iterable[str], label: str, ink: str = "#") -> "BinaryGlyph":
        return cls(np.array([[1 if ch == ink else 0 for ch in row] for row in rows]), label)


def binarize(img, cfg: PreprocessConfig = PreprocessConfig()) -> np.ndarray:
    """Pixels strictly darker than the threshold become ink (1)."""
    img = np.asarray(img, dtype=float)
    return (img < cfg.threshold).astype(np.uint8)


def downsample_8x6(binary) -> np.ndarray:
    """Block-mean pool to 8x6; a cell is ink when at least half its block is.

    Block ``(i, j)`` covers rows ``floor(i*R/8) .. floor((i+1)*R/8)`` and the
    analogous column range.
    """
    b = np.asarray(binary)
    if b.ndim != 2 or b.shape[0] < GLYPH_ROWS or b.shape[1] < GLYPH_COLS:
        raise ValueError(f"image must be at least {GLYPH_ROWS}x{GLYPH_COLS}, got {b.shape}")
    rows, cols = b.shape
    r_edges = [i * rows // GLYPH_ROWS for i in range(GLYPH_ROWS + 1)]
    c_edges = [j * cols // GLYPH_COLS for j in range(GLYPH_COLS + 1)]
    out = np.zeros((GLYPH_ROWS, GLYPH_COLS), dtype=np.uint8)
    for i in range(GLYPH_ROWS):
        for j in range(GLYPH_COLS):
            block = b[r_edges[i]:r_edges[i + 1], c_edges[j]:c_edges[j + 1]]
            out[i, j] = 2 * int(block.sum()) >= block.size
    return out


def reshape_48(glyph: BinaryGlyph) -> np.ndarray:
    """Row-major flatten: entry ``r*6 + c`` is ``grid[r, c]``."""
    return glyph.grid.reshape(GLYPH_SIZE).astype(float)


def unflatten(vec, label: str) -> BinaryGlyph:
    v = np.asarray(vec)
    if v.shape != (GLYPH_SIZE,):
        raise ValueError(f"expected a length-{GLYPH_SIZE} vector, got shape {v.shape}")
    return BinaryGlyph(v.reshape(GLYPH_ROWS, GLYPH_COLS).round().astype(np.uint8), label)


def image_to_glyph(img, label: str, cfg: PreprocessConfig = PreprocessConfig()) -> BinaryGlyph:
    return BinaryGlyph(downsample_8x6(binarize(img, cfg)), label)


def assemble_sample(glyphs: Iterable[BinaryGlyph]) -> np.ndarray:
    """48 x 26 sample matrix, column c holding the glyph of letter c."""
    by_label: dict[str, BinaryGlyph] = {}
    for g in glyphs:
        if g.label in by_label:
            raise ValueError(f"duplicate glyph for letter {g.label}")
        by_label[g.label] = g
    missing = [c for c in LETTERS if c not in by_label]
    if missing:
        raise ValueError(f"missing glyph for letter(s) {', '.join(missing)}")
    return np.column_stack([reshape_48(by_label[c]) for c in LETTERS])


def sample_glyphs(sample) -> list[BinaryGlyph]:
    """Inverse of :func:`assemble_sample`."""
    s = np.asarray(sample)
    if s.shape != (GLYPH_SIZE, len(LETTERS)):
        raise ValueError(f"sample must be {GLYPH_SIZE}x{len(LETTERS)}, got {s.shape}")
    if not np.isin(s, (0, 1)).all():
        raise ValueError("sample entries must be 0 or 1")
    return [unflatten(s[:, c], letter) for c, letter in enumerate(LETTERS)]


def noise_perturb(glyph: BinaryGlyph, flip_prob: float, prng: np.random.Generator) -> BinaryGlyph:
    """Flip each cell independently with probability ``flip_prob``.

    Always consumes exactly 48 draws so later draws do not depend on
    ``flip_prob``.
    """
    if not 0 <= flip_prob <= 1:
        raise ValueError("flip_prob must lie in [0, 1]")
    flips = prng.random(glyph.grid.shape) < flip_prob
    return BinaryGlyph(np.where(flips, 1 - glyph.grid, glyph.grid), glyph.label)


def bundled_glyphs(glyph_table: Mapping[str, list[str]] | None = None) -> list[BinaryGlyph]:
    from .font import GLYPHS

    table = glyph_table or GLYPHS
    return [BinaryGlyph.from_rows(table[c], c) for c in LETTERS]
