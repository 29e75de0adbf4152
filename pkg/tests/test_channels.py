import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bsc
from infopriv.capacity import information
from infopriv.channels import (
    MatrixUniverse,
    PrivacyChannel,
    compose_independent,
    compose_same_input,
    constant_channel,
    dumps_channel,
    generate,
    identity_channel,
    induced_channel,
    induced_input,
    joint_io,
    lift_channel,
    loads_channel,
    output_distribution,
    random_channel,
    randomized_response,
    truncated_geometric,
    xor_channel,
)
from infopriv.errors import DimensionError, DistributionError
from infopriv.probability import JointDistribution, UniverseShape, mutual_information


def assert_stochastic(ch: PrivacyChannel):
    assert ch.rows.shape == (ch.input_shape.total_size, ch.output_size)
    assert np.all(ch.rows >= 0)
    np.testing.assert_allclose(ch.rows.sum(axis=1), 1.0, atol=1e-12)


@pytest.mark.parametrize("rows", [[[0.5, 0.6], [0.5, 0.5]], [[1.2, -0.2], [0, 1]]])
def test_rows_must_be_stochastic(rows):
    with pytest.raises(DistributionError):
        PrivacyChannel(UniverseShape((2,)), rows)


def test_row_count_checked():
    with pytest.raises(DimensionError):
        PrivacyChannel(UniverseShape((2, 2)), np.eye(2))


@pytest.mark.parametrize("kind,params", [
    ("identity", {"alphabets": (2, 3)}),
    ("constant", {"alphabets": (2,), "outputs": 3}),
    ("rr", {"alphabets": (2, 3), "q": 0.3}),
    ("xor", {"records": 3}),
    ("geometric", {"records": 3, "alpha": 0.4}),
])
def test_generators_are_stochastic(kind, params):
    assert_stochastic(generate(kind, **params))


def test_unknown_generator():
    with pytest.raises(ValueError):
        generate("laplace")


def test_xor_table():
    ch = xor_channel(2)
    np.testing.assert_array_equal(ch.rows, [[1, 0], [0, 1], [0, 1], [1, 0]])


def test_geometric_rows_decay_from_true_count():
    ch = truncated_geometric(3, 0.5)
    for f in range(ch.input_shape.total_size):
        c = sum(ch.input_shape.unflatten(f))
        assert ch.rows[f, c] == pytest.approx(ch.rows[f].max())


def test_randomized_response_multivalue():
    ch = randomized_response((3,), 0.4)
    np.testing.assert_allclose(ch.rows, [[0.6, 0.2, 0.2], [0.2, 0.6, 0.2], [0.2, 0.2, 0.6]])


def test_output_distribution():
    ch = bsc(0.1)
    x = JointDistribution(UniverseShape((2,)), [0.25, 0.75])
    np.testing.assert_allclose(output_distribution(ch, x).mass, [0.25 * 0.9 + 0.75 * 0.1, 0.25 * 0.1 + 0.75 * 0.9])


def test_joint_io_marginalizes_other_records():
    ch = identity_channel((2, 2))
    x = JointDistribution.uniform((2, 2))
    j = joint_io(ch, x, (1,))
    np.testing.assert_allclose(j, [[0.25, 0, 0.25, 0], [0, 0.25, 0, 0.25]])


def test_xor_induced_channel_is_bsc():
    # other record ~ Bern(0.25) turns the XOR into a crossover-0.25 channel on record 1
    x = JointDistribution.product(JointDistribution((2,), [0.5, 0.5]), JointDistribution((2,), [0.75, 0.25]))
    ind = induced_channel(xor_channel(2), x, (0,))
    np.testing.assert_allclose(ind.rows, [[0.75, 0.25], [0.25, 0.75]])


def test_induced_channel_drops_zero_rows():
    x = JointDistribution.point((2, 2), (1, 0))
    ind = induced_channel(identity_channel((2, 2)), x, (0,))
    assert ind.source_rows == (1,)
    law = induced_input(x, ind, (0,))
    np.testing.assert_allclose(law.mass, [1.0])


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_induced_channel_preserves_information(seed):
    rng = np.random.default_rng(seed)
    ch = random_channel((2, 3), 3, rng)
    x = JointDistribution((2, 3), rng.dirichlet(np.ones(6)))
    ind = induced_channel(ch, x, (1,))
    assert_stochastic(ind)
    direct = information(ch, x, (1,))
    via = mutual_information(induced_input(x, ind, (1,)).mass[:, None] * ind.rows)
    assert direct == pytest.approx(via, abs=1e-12)


def _brute_force_two_views(p):
    cells = {}
    for x in (0, 1):
        for y1 in (0, 1):
            for y2 in (0, 1):
                cells[x, y1, y2] = 0.5 * (p if y1 != x else 1 - p) * (p if y2 != x else 1 - p)
    total = 0.0
    for (x, y1, y2), v in cells.items():
        py = sum(cells[xx, y1, y2] for xx in (0, 1))
        total += v * np.log2(v / (0.5 * py))
    return total


def test_compose_same_input_bsc_pair():
    # two independent crossover-0.3 views of a uniform bit, checked against an 8-cell sum
    ch = compose_same_input(bsc(0.3), bsc(0.3))
    assert ch.output_size == 4
    x = JointDistribution.uniform((2,))
    value = information(ch, x, (0,))
    assert value == pytest.approx(_brute_force_two_views(0.3), abs=1e-12)
    assert value == pytest.approx(0.21887, abs=1e-5)


def test_compose_same_input_ordering():
    ch = compose_same_input(identity_channel((2,)), constant_channel((2,), 3))
    # y1 is the slow index
    np.testing.assert_allclose(ch.rows[0], [1 / 3] * 3 + [0] * 3)


def test_compose_independent_shape():
    ch = compose_independent(bsc(0.1), randomized_response((3,), 0.2))
    assert ch.input_shape.alphabet_sizes == (2, 3)
    assert ch.output_size == 6
    assert_stochastic(ch)


def test_lift_channel_reads_only_its_slots():
    ch = randomized_response((3,), 0.2)
    lifted = lift_channel(ch, UniverseShape((2, 3)), (1,))
    t = lifted.tensor()
    np.testing.assert_allclose(t[0], t[1])
    np.testing.assert_allclose(t[0], ch.rows)


def test_matrix_universe_slots():
    u = MatrixUniverse((UniverseShape((2, 3)), UniverseShape((2, 3))))
    assert (u.n, u.m) == (2, 2)
    assert u.shape.alphabet_sizes == (2, 3, 2, 3)
    assert u.dataset_slots(1) == (2, 3)
    assert u.individual_slots(1) == (1, 3)


def test_json_roundtrip_exact(rng):
    ch = random_channel((2, 3), 4, rng)
    back = loads_channel(dumps_channel(ch))
    assert back.input_shape == ch.input_shape
    np.testing.assert_array_equal(back.rows, ch.rows)


def test_json_rejects_malformed():
    with pytest.raises(DistributionError):
        loads_channel('{"alphabets": [2], "rows": [[1, 0], [0, 1]]}')
