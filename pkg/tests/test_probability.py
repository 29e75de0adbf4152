import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infopriv.errors import ConditioningError, DimensionError, DistributionError
from infopriv.probability import (
    JointDistribution,
    MarginalDistribution,
    UniverseShape,
    conditional,
    conditional_mutual_information,
    entropy,
    flatten,
    marginal,
    mutual_information,
    normalize_index_set,
    unflatten,
)

shapes = st.lists(st.integers(1, 4), min_size=1, max_size=4).map(tuple)


@given(shapes, st.data())
def test_flatten_roundtrip(sizes, data):
    shape = UniverseShape(sizes)
    idx = data.draw(st.integers(0, shape.total_size - 1))
    assert flatten(shape, unflatten(shape, idx)) == idx


def test_row_major_first_coordinate_slowest():
    shape = UniverseShape((2, 3))
    assert flatten(shape, (0, 2)) == 2
    assert flatten(shape, (1, 0)) == 3
    assert unflatten(shape, 5) == (1, 2)


@pytest.mark.parametrize("coords", [(2, 0), (0, 3), (0,), (0, 0, 0)])
def test_flatten_rejects_bad_coords(coords):
    with pytest.raises(DimensionError):
        flatten(UniverseShape((2, 3)), coords)


@pytest.mark.parametrize("index_set", [(), (3,), (-1,)])
def test_index_set_validation(index_set):
    with pytest.raises(DimensionError):
        normalize_index_set(UniverseShape((2, 2)), index_set)


def test_index_set_sorted_unique():
    assert normalize_index_set(UniverseShape((2, 2, 2)), (2, 0, 2)) == (0, 2)


@pytest.mark.parametrize("mass", [[0.5, 0.6], [1.5, -0.5], [np.nan, 1.0]])
def test_invalid_mass_rejected(mass):
    with pytest.raises(DistributionError):
        JointDistribution(UniverseShape((2,)), mass)


def test_small_drift_renormalized():
    d = JointDistribution(UniverseShape((2,)), [0.5, 0.5 + 5e-10])
    assert d.mass.sum() == pytest.approx(1.0, abs=1e-15)
    assert not d.mass.flags.writeable


def test_wrong_size_rejected():
    with pytest.raises(DimensionError):
        JointDistribution(UniverseShape((2, 2)), [0.5, 0.5])


@pytest.mark.parametrize("mass,bits", [([1, 0], 0.0), ([0.5, 0.5], 1.0), ([0.25] * 4, 2.0), ([0.5, 0.25, 0.25], 1.5)])
def test_entropy_values(mass, bits):
    assert entropy(MarginalDistribution(mass)) == pytest.approx(bits, abs=1e-12)


@given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=12).filter(lambda v: sum(v) > 1e-6))
def test_entropy_bounds(vals):
    p = np.array(vals) / sum(vals)
    h = entropy(p)
    assert -1e-12 <= h <= np.log2(len(vals)) + 1e-12


def test_marginal_and_conditional():
    table = np.array([[0.1, 0.2], [0.3, 0.4]])
    j = JointDistribution(UniverseShape((2, 2)), table.reshape(-1))
    np.testing.assert_allclose(marginal(j, (0,)).mass, [0.3, 0.7])
    np.testing.assert_allclose(marginal(j, (1,)).mass, [0.4, 0.6])
    c = conditional(j, (0,), (1,))
    np.testing.assert_allclose(c.mass, [0.3 / 0.7, 0.4 / 0.7])


def test_conditional_zero_mass():
    j = JointDistribution.point(UniverseShape((2, 2)), (0, 0))
    with pytest.raises(ConditioningError):
        conditional(j, (0,), (1,))


def test_bsc_information():
    # crossover 0.11 with uniform input
    p = 0.11
    joint = 0.5 * np.array([[1 - p, p], [p, 1 - p]])
    assert mutual_information(joint) == pytest.approx(0.5001, abs=1e-4)


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_chain_rule_and_nonnegativity(seed):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(2 * 3 * 2)).reshape(2, 3, 2)
    cmi = conditional_mutual_information(p)
    i_a_bc = mutual_information(p.reshape(2, 6))
    i_a_c = mutual_information(p.sum(axis=1))
    assert cmi >= 0
    assert i_a_bc == pytest.approx(i_a_c + cmi, abs=1e-12)


def test_product_distribution_independent():
    a = JointDistribution(UniverseShape((2,)), [0.3, 0.7])
    b = JointDistribution(UniverseShape((3,)), [0.2, 0.3, 0.5])
    j = JointDistribution.product(a, b)
    assert j.shape.alphabet_sizes == (2, 3)
    assert mutual_information(j.table()) == pytest.approx(0.0, abs=1e-15)
