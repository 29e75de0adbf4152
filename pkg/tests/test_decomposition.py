import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infopriv.capacity import information
from infopriv.channels import compose_same_input, identity_channel, random_channel, xor_channel
from infopriv.decomposition import (
    SUITES,
    condition_on_records,
    cross_information,
    dirichlet_joint,
    posterior_update,
    verify_basic_decomposition,
    verify_general_decomposition,
    verify_group_decomposition,
)
from infopriv.errors import ConditioningError, DimensionError
from infopriv.probability import JointDistribution, conditional_mutual_information, marginal


def test_condition_on_records_pins_value():
    p = JointDistribution((2, 2), [0.1, 0.2, 0.3, 0.4])
    q = condition_on_records(p, (0,), (1,))
    np.testing.assert_allclose(q.mass, [0, 0, 0.3 / 0.7, 0.4 / 0.7])


def test_condition_on_zero_mass():
    p = JointDistribution.point((2, 2), (0, 1))
    with pytest.raises(ConditioningError):
        condition_on_records(p, (0,), (1,))


def test_posterior_update_bayes():
    ch = identity_channel((2,))
    p = JointDistribution((2,), [0.3, 0.7])
    np.testing.assert_allclose(posterior_update(p, ch, 1).mass, [0, 1])


def test_group_decomposition_xor():
    rep = verify_group_decomposition(xor_channel(2), JointDistribution.uniform((2, 2)), (0,), (1,))
    # the first record alone says nothing, the second reveals the output once x1 is pinned
    assert rep.lhs == pytest.approx(1.0)
    assert rep.terms[0][2] == pytest.approx(0.0, abs=1e-15)
    assert rep.residual <= 1e-12


def test_group_decomposition_rejects_overlap():
    with pytest.raises(DimensionError):
        verify_group_decomposition(xor_channel(2), JointDistribution.uniform((2, 2)), (0,), (0, 1))


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_basic_decomposition_equals_chain_rule(seed):
    rng = np.random.default_rng(seed)
    ch1, ch2 = random_channel((2, 2), 2, rng), random_channel((2, 2), 3, rng)
    p = dirichlet_joint((2, 2), rng)
    rep = verify_basic_decomposition(ch1, ch2, p, 0)
    # weighted posterior term equals I(X_0; Y1 | Y2)
    joint = (p.table()[..., None, None] * ch1.tensor()[..., :, None] * ch2.tensor()[..., None, :]).sum(axis=1)
    cmi = conditional_mutual_information(joint)
    assert sum(w * v for _, w, v in rep.terms[1:]) == pytest.approx(cmi, abs=1e-12)
    assert rep.residual <= 1e-12


def test_general_decomposition_identity_correlated():
    ch = identity_channel((2,))
    p = JointDistribution((2, 2), [0.5, 0, 0, 0.5])
    rep = verify_general_decomposition(ch, ch, p, 0)
    assert rep.lhs == pytest.approx(1.0)
    assert rep.residual <= 1e-12
    # zero-mass pins are skipped, not crashed on
    assert rep.skipped > 0


def test_cross_information_via_collapsed_channel():
    ch = identity_channel((2,))
    from infopriv.channels import lift_channel
    from infopriv.probability import UniverseShape

    lifted = lift_channel(ch, UniverseShape((2, 2)), (0,))
    p = JointDistribution((2, 2), [0.5, 0, 0, 0.5])
    assert cross_information(lifted, p, (1,), 1) == pytest.approx(1.0)


@pytest.mark.parametrize("lemma,trials", [("group", 100), ("basic", 100), ("general", 50)])
def test_suites_residuals(lemma, trials):
    reports = SUITES[lemma](trials=trials, seed=0)
    assert len(reports) == trials
    assert max(r.residual for r in reports) <= 1e-9


def test_suites_are_seeded():
    a = SUITES["general"](trials=3, seed=4)
    b = SUITES["general"](trials=3, seed=4)
    assert [r.lhs for r in a] == [r.lhs for r in b]


def test_report_dict():
    rep = SUITES["basic"](trials=1)[0]
    d = rep.to_dict()
    assert d["residual"] == rep.residual
    assert len(d["rhs_terms"]) == len(rep.terms)
