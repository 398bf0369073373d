import numpy as np
import pytest

from bpocr.network import (
    NetworkState,
    SnapshotError,
    Topology,
    dumps_network,
    forward,
    init_network,
    load_network,
    loads_network,
    output_of,
    save_network,
)
from bpocr.numcore import ShapeError, make_prng

from .conftest import binary_inputs

# tanh(1) and tanh(tanh(1)), from an exact rational series and mpmath at 40 digits
TANH_1 = 0.7615941559557649
TANH_TANH_1 = 0.6420149920119997


def test_topology_validation():
    with pytest.raises(ValueError):
        Topology(48, (), 26)
    with pytest.raises(ValueError):
        Topology(48, (10, 0), 26)
    assert Topology().sizes == (48, 10, 26)
    assert Topology.uniform(3).sizes == (48, 10, 10, 10, 26)


def test_init_shapes_default_topology():
    net = init_network(Topology(), make_prng(1))
    assert [w.shape for w in net.weights] == [(10, 48), (26, 10)]
    assert [b.shape for b in net.biases] == [(10,), (26,)]


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_init_layer_count(depth):
    net = init_network(Topology.uniform(depth), make_prng(1))
    assert len(net.weights) == depth + 1


def test_init_deterministic():
    a = init_network(Topology.uniform(2), make_prng(7))
    b = init_network(Topology.uniform(2), make_prng(7))
    assert a.equals(b)
    c = init_network(Topology.uniform(2), make_prng(8))
    assert not a.equals(c)


def test_init_ranges():
    paper = init_network(Topology.uniform(3), make_prng(3), "paper")
    sym = init_network(Topology.uniform(3), make_prng(3), "symmetric")
    for p in paper.params():
        assert p.min() >= 0 and p.max() < 1
    for p, q in zip(sym.params(), paper.params()):
        assert p.min() >= -0.5 and p.max() < 0.5
        np.testing.assert_array_equal(p, q - 0.5)


def test_init_draw_order():
    prng = make_prng(5)
    draws = prng.random(10 * 48 + 10 + 26 * 10 + 26)
    net = init_network(Topology(), make_prng(5))
    np.testing.assert_array_equal(net.weights[0].ravel(), draws[:480])
    np.testing.assert_array_equal(net.biases[0], draws[480:490])
    np.testing.assert_array_equal(net.weights[1].ravel(), draws[490:750])
    np.testing.assert_array_equal(net.biases[1], draws[750:])


def test_unknown_scheme():
    with pytest.raises(ValueError):
        init_network(Topology(), make_prng(0), "gaussian")


def test_forward_zero_net():
    acts = forward(NetworkState.zeros(Topology.uniform(2)), np.ones(48))
    assert all(np.all(a == 0) for a in acts[1:])
    np.testing.assert_array_equal(acts[0], np.ones(48))


def test_forward_one_one_one():
    topo = Topology(1, (1,), 1)
    net = NetworkState(topo, [np.ones((1, 1)), np.ones((1, 1))], [np.zeros(1), np.zeros(1)])
    acts = forward(net, [1.0])
    assert acts[1][0] == pytest.approx(TANH_1, abs=1e-15)
    assert acts[2][0] == pytest.approx(TANH_TANH_1, abs=1e-15)


def test_forward_output_length(random_net):
    net = random_net(scheme="paper")
    y = output_of(forward(net, np.ones(48)))
    assert y.shape == (26,)
    assert output_of([y]) is y
    assert output_of([output_of([y])]) is y


def test_forward_shape_error(random_net):
    with pytest.raises(ShapeError):
        forward(random_net(), np.ones(47))


def test_forward_batch_matches_columns(random_net):
    net = random_net(depth=3)
    x = binary_inputs(0, 26)
    batch = forward(net, x)
    for c in range(26):
        single = forward(net, x[:, c])
        for a, b in zip(single, batch):
            np.testing.assert_allclose(a, b[:, c], rtol=0, atol=1e-15)


def test_forward_pure_and_bounded(random_net):
    net = random_net(depth=3, scheme="paper")
    x = binary_inputs(1, 26)
    a, b = forward(net, x), forward(net, x)
    for p, q in zip(a, b):
        np.testing.assert_array_equal(p, q)
    for layer in a[1:]:
        assert np.all(np.abs(layer) <= 1)


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_hidden_permutation_equivalence(random_net, depth):
    net = random_net(depth=depth, seed=depth)
    x = binary_inputs(2, 26)
    before = output_of(forward(net, x))
    perm_net = net.copy()
    rng = np.random.default_rng(depth)
    for l in range(depth):
        perm = rng.permutation(net.weights[l].shape[0])
        perm_net.weights[l] = perm_net.weights[l][perm]
        perm_net.biases[l] = perm_net.biases[l][perm]
        perm_net.weights[l + 1] = perm_net.weights[l + 1][:, perm]
    np.testing.assert_allclose(output_of(forward(perm_net, x)), before, rtol=0, atol=1e-12)


def test_snapshot_round_trip(random_net, tmp_path):
    net = random_net(depth=3, seed=11)
    save_network(net, tmp_path / "n.snapshot")
    back = load_network(tmp_path / "n.snapshot")
    assert back.equals(net)
    assert back.init_scheme == "symmetric"


def test_snapshot_zero_net():
    text = dumps_network(NetworkState.zeros(Topology()))
    numbers = [float(tok) for line in text.splitlines() if not line[0].isalpha() for tok in line.split()]
    assert len(numbers) == 10 * 48 + 10 + 26 * 10 + 26
    assert set(numbers) == {0.0}
    assert text.splitlines()[:3] == ["bpocr-net 1", "topology 48 10 26", "activations linear tansig tansig"]


def test_snapshot_truncated(random_net):
    text = dumps_network(random_net())
    lines = text.splitlines()
    with pytest.raises(SnapshotError, match="unexpected end"):
        loads_network("\n".join(lines[:-5]))


def test_snapshot_bad_value_reports_line(random_net):
    lines = dumps_network(random_net()).splitlines()
    lines[7] = lines[7].replace(lines[7].split()[2], "oops", 1)
    with pytest.raises(SnapshotError, match="line 8"):
        loads_network("\n".join(lines))


def test_snapshot_bad_header():
    with pytest.raises(SnapshotError, match="line 1"):
        loads_network("something else\n")
