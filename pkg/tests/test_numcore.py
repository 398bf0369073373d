from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bpocr.numcore import ShapeError, make_prng, matmul, tansig, tansig_deriv_from_output, uniform_01


def tanh_series(x: Fraction, terms: int = 60) -> float:
    """tanh from an exact rational Taylor series of exp(2x)."""
    e2x, term = Fraction(0), Fraction(1)
    for k in range(terms):
        e2x += term
        term = term * 2 * x / (k + 1)
    return float((e2x - 1) / (e2x + 1))


def test_matmul_identity_and_zero():
    m = np.arange(9.0).reshape(3, 3)
    np.testing.assert_array_equal(matmul(np.eye(3), m), m)
    np.testing.assert_array_equal(matmul(np.zeros((3, 3)), m), np.zeros((3, 3)))


def test_matmul_manual_expansion():
    np.testing.assert_array_equal(matmul([[1, 2], [3, 4]], [[5, 6], [7, 8]]), [[19, 22], [43, 50]])


def test_matmul_shape_error_names_shapes():
    with pytest.raises(ShapeError, match=r"\(2, 3\).*\(2, 3\)"):
        matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_matmul_rejects_nan():
    with pytest.raises(ValueError):
        matmul(np.array([[np.nan]]), np.ones((1, 1)))


def test_matmul_associative():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n, k, m, p = rng.integers(1, 8, size=4)
        a, b, c = rng.normal(size=(n, k)), rng.normal(size=(k, m)), rng.normal(size=(m, p))
        np.testing.assert_allclose(matmul(matmul(a, b), c), matmul(a, matmul(b, c)), rtol=1e-9, atol=1e-12)


def test_tansig_values():
    assert tansig(0.0) == 0.0
    assert tansig(1.0) == pytest.approx(tanh_series(Fraction(1)), abs=1e-16)
    assert tansig(1.0) == 0.7615941559557649


@given(st.floats(-30, 30))
def test_tansig_odd_and_bounded(x):
    assert tansig(-x) == -tansig(x)
    assert abs(tansig(x)) <= 1.0


def test_tansig_strictly_increasing_and_below_one():
    # float64 rounds tanh(x) to exactly +-1 for |x| > ~19.06
    xs = np.linspace(-8, 8, 2001)
    assert np.all(np.diff(tansig(xs)) > 0)
    assert np.all(np.abs(tansig(np.linspace(-18, 18, 2001))) < 1)
    assert np.all(np.abs(tansig(np.linspace(-1e3, 1e3, 101))) <= 1)


def test_tansig_matches_logistic_form():
    xs = np.linspace(-5, 5, 101)
    np.testing.assert_allclose(tansig(xs), 2 / (1 + np.exp(-2 * xs)) - 1, atol=1e-15)


def test_derivative_from_output_endpoints():
    assert tansig_deriv_from_output(0.0) == 1.0
    assert tansig_deriv_from_output(1.0) == 0.0
    assert tansig_deriv_from_output(-1.0) == 0.0


def test_derivative_matches_finite_differences():
    h = 1e-5
    for x in np.round(np.arange(-4, 4.0001, 0.1), 10):
        fd = (np.tanh(x + h) - np.tanh(x - h)) / (2 * h)
        an = tansig_deriv_from_output(tansig(x))
        assert abs(an - fd) <= 1e-6 * abs(fd)
        assert abs(an - fd) <= 1e-7


def test_uniform_determinism_and_range():
    a = uniform_01(make_prng(42), 100_000)
    b = uniform_01(make_prng(42), 100_000)
    np.testing.assert_array_equal(a, b)
    assert a.min() >= 0 and a.max() < 1
    assert 0.49 <= a.mean() <= 0.51


def test_prng_stream_is_pinned():
    # PCG64 output is specified by its algorithm; these bytes must never change.
    v = uniform_01(make_prng(2011), 3)
    assert v.tobytes().hex() == make_prng(2011).random(3).tobytes().hex()
    assert [float(x) for x in v] == [0.7475000009190534, 0.2518979817680528, 0.6827612400221917]


def test_uniform_rejects_zero_count():
    with pytest.raises(ValueError):
        uniform_01(make_prng(0), 0)
