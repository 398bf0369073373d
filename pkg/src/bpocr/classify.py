"""One-hot targets, COMPET winner-take-all mapping and accuracy scoring."""

from __future__ import annotations

import string
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .network import NetworkState, forward

LETTERS = string.ascii_uppercase


def letter_index(letter: str) -> int:
    if len(letter) != 1 or letter not in LETTERS:
        raise ValueError(f"not an uppercase letter A-Z: {letter!r}")
    return LETTERS.index(letter)


def one_hot(letter: str, size: int = 26) -> np.ndarray:
    v = np.zeros(size)
    v[letter_index(letter)] = 1.0
    return v


def targets_matrix() -> np.ndarray:
    """26 x 26 target matrix; column c is the one-hot vector of letter c."""
    return np.eye(len(LETTERS))


def compet(v) -> np.ndarray:
    """One-hot vector at the largest entry; ties go to the lowest index."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("compet needs a non-empty 1-D vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("compet input contains NaN or Inf")
    out = np.zeros_like(v)
    out[int(np.argmax(v))] = 1.0  # argmax returns the first maximum
    return out


def compet_columns(y: np.ndarray) -> np.ndarray:
    return np.column_stack([compet(col) for col in np.asarray(y).T])


def classify_sample(net: NetworkState, columns) -> np.ndarray:
    """COMPET output for every input column (26 x 26 for a letter sample)."""
    return compet_columns(forward(net, np.asarray(columns, dtype=float))[-1])


def predicted_letters(onehots: np.ndarray) -> list[str]:
    return [LETTERS[int(np.argmax(col))] for col in np.asarray(onehots).T]


@dataclass(frozen=True)
class RecognitionResult:
    predicted: tuple[str, ...]
    truth: tuple[str, ...]

    @property
    def correct_flags(self) -> tuple[bool, ...]:
        return tuple(p == t for p, t in zip(self.predicted, self.truth))

    @property
    def correct(self) -> int:
        return sum(self.correct_flags)

    @property
    def total(self) -> int:
        return len(self.truth)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.correct, self.total)

    @property
    def accuracy(self) -> float:
        return self.correct / self.total

    @property
    def percent(self) -> str:
        # truncated, not rounded: 24/26 = 92.307...% displays as 92.30
        return f"{int(self.ratio * 10000) / 100:.2f}"

    def __str__(self) -> str:
        return f"{self.correct} ({self.percent}%)"


def accuracy(predictions, truths) -> RecognitionResult:
    predictions, truths = tuple(predictions), tuple(truths)
    if not truths:
        raise ValueError("accuracy needs at least one prediction")
    if len(predictions) != len(truths):
        raise ValueError(f"{len(predictions)} predictions for {len(truths)} truths")
    return RecognitionResult(predictions, truths)


def evaluate(net: NetworkState, columns) -> RecognitionResult:
    """Classify a 48 x 26 letter sample whose column c holds letter c."""
    return accuracy(predicted_letters(classify_sample(net, columns)), LETTERS)
