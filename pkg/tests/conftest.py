import numpy as np
import pytest

from bpocr.network import Topology, init_network
from bpocr.numcore import make_prng


@pytest.fixture
def font_sample():
    from bpocr.preprocess import assemble_sample, bundled_glyphs

    return assemble_sample(bundled_glyphs())


@pytest.fixture
def random_net():
    def make(depth=1, hidden=10, seed=0, scheme="symmetric"):
        return init_network(Topology.uniform(depth, hidden), make_prng(seed), scheme)

    return make


def binary_inputs(seed, n, size=48):
    return (np.random.default_rng(seed).random((size, n)) < 0.4).astype(float)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
