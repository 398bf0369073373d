"""Dense float64 arithmetic, the tansig activation and the seeded random source.

Matrices and vectors are plain ``numpy.ndarray`` objects (row-major, float64).
The random source is numpy's PCG64 bit generator, whose output stream is
fixed by its published algorithm and therefore identical across platforms.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

DTYPE = np.float64


class ShapeError(ValueError):
    """Raised when array dimensions do not conform."""


class Activation(str, Enum):
    LINEAR = "linear"
    TANSIG = "tansig"


def as_matrix(values) -> np.ndarray:
    """Coerce ``values`` to a finite 2-D float64 array."""
    m = np.array(values, dtype=DTYPE, ndmin=2)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got {m.ndim} dimensions")
    check_finite(m)
    return m


def as_vector(values) -> np.ndarray:
    v = np.array(values, dtype=DTYPE).reshape(-1)
    if v.size == 0:
        raise ShapeError("vector must have at least one entry")
    check_finite(v)
    return v


def check_finite(a: np.ndarray, what: str = "array") -> None:
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{what} contains NaN or Inf")


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product ``a @ b`` with an explicit shape check."""
    a = np.asarray(a, dtype=DTYPE)
    b = np.asarray(b, dtype=DTYPE)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    check_finite(a, "left operand")
    check_finite(b, "right operand")
    return a @ b


def tansig(x):
    # 2/(1+exp(-2x)) - 1 is algebraically tanh(x); tanh avoids the cancellation.
    return np.tanh(x)


def tansig_deriv_from_output(y):
    """Derivative of tansig written in terms of its output: ``1 - y**2``."""
    return 1.0 - np.square(y)


def activate(kind: Activation, x):
    if kind is Activation.LINEAR:
        return x
    return tansig(x)


def make_prng(seed: int) -> np.random.Generator:
    """Seeded PCG64 generator. Same seed gives the same stream everywhere."""
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    return np.random.Generator(np.random.PCG64(seed))


def uniform_01(prng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` draws from U[0, 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return prng.random(n, dtype=DTYPE)
