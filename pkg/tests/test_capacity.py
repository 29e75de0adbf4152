import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bsc, h2
from infopriv.capacity import (
    KnowledgeSet,
    _entropy_and_grad,
    _repair,
    _Target,
    blahut_arimoto,
    capacity,
    capacity_grid_oracle,
    capacity_mirror_ascent,
    compositions,
    default_resolution,
    entropy_modulus,
    exact_capacity,
    grid_size,
    group_capacity,
    individual_capacity,
)
from infopriv.channels import constant_channel, identity_channel, random_channel, randomized_response, xor_channel
from infopriv.errors import InfeasibleError
from infopriv.probability import JointDistribution, entropy, xlogx


@pytest.mark.parametrize("p", [0.0, 0.05, 0.11, 0.25, 0.5])
def test_blahut_arimoto_bsc(p):
    est = blahut_arimoto(bsc(p))
    assert est.value == pytest.approx(1 - h2(p), abs=1e-6)
    assert est.lower <= est.value <= est.upper
    assert est.upper - est.lower <= 1e-8


def test_blahut_arimoto_z_channel():
    # Z channel with p(1->0) = 0.5 has capacity log2(5/4)
    from infopriv.channels import PrivacyChannel

    ch = PrivacyChannel((2,), [[1.0, 0.0], [0.5, 0.5]])
    assert blahut_arimoto(ch).value == pytest.approx(math.log2(1.25), abs=1e-7)


@pytest.mark.parametrize("q,expected", [(0.25, 0.18872), (0.3, 0.11871)])
def test_randomized_response_capacity(q, expected):
    est = exact_capacity(randomized_response((2,), q), (0,))
    assert est.value == pytest.approx(expected, abs=1e-5)


def test_xor_exact_capacity():
    est = exact_capacity(xor_channel(2), (0,))
    assert est.value == pytest.approx(1.0, abs=1e-9)
    # the attaining law pins the other record
    assert entropy(est.attaining_input) == pytest.approx(1.0, abs=1e-9)


def test_constant_channel_has_zero_capacity():
    for method in ("exact", "grid", "mirror"):
        est = capacity(constant_channel((2, 2), 3), (0,), KnowledgeSet(), method)
        assert est.value == pytest.approx(0.0, abs=1e-12)


def test_identity_group_capacity():
    est = group_capacity(identity_channel((2, 2)), 2, KnowledgeSet(), "exact")
    assert est.value == pytest.approx(2.0, abs=1e-8)


def test_exact_rejects_constraint():
    with pytest.raises(ValueError):
        capacity(xor_channel(2), (0,), KnowledgeSet(1.0), "exact")


def test_enum_cap():
    with pytest.raises(InfeasibleError) as info:
        exact_capacity(xor_channel(3), (0,), enum_cap=10)
    assert info.value.cap == "enum_cap"
    assert info.value.fallback == "mirror"


def test_grid_cap():
    with pytest.raises(InfeasibleError):
        capacity_grid_oracle(xor_channel(3), (0,), resolution=64, grid_cap=1000)


def test_knowledge_set_range():
    with pytest.raises(ValueError):
        KnowledgeSet(-0.1)
    with pytest.raises(ValueError):
        KnowledgeSet(2.5).check(xor_channel(2).input_shape)


@pytest.mark.parametrize("total,parts", [(4, 1), (4, 3), (6, 4)])
def test_compositions(total, parts):
    c = compositions(total, parts)
    assert len(c) == grid_size(total, parts)
    assert np.all(c.sum(axis=1) == total)
    assert np.all(c >= 0)
    assert len({tuple(r) for r in c}) == len(c)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 8, 9])
def test_default_resolution_contains_uniform(k):
    g = default_resolution(k)
    assert g > 0
    if k <= 8:
        assert g % k == 0


@settings(max_examples=100)
@given(st.floats(0.0, 1.0), st.floats(0.0, 0.2), st.floats(-1.0, 1.0))
def test_entropy_modulus_is_sound(q, e, frac):
    t = min(max(q + frac * e, 0.0), 1.0)
    bound = float(entropy_modulus(np.array([q]), np.array([e]))[0])
    gap = abs(float(xlogx(np.array([t]))[0] - xlogx(np.array([q]))[0]))
    assert gap <= bound + 1e-12


def test_grid_bracket_contains_exact(rng):
    for _ in range(5):
        ch = random_channel((2, 2), 3, rng)
        ex = exact_capacity(ch, (0,))
        gr = capacity_grid_oracle(ch, (0,), resolution=32)
        assert gr.lower <= ex.value + 1e-9
        assert ex.value <= gr.upper + 1e-9


def test_xor_constrained_grid():
    full = capacity_grid_oracle(xor_channel(2), (0,), KnowledgeSet(2.0))
    assert full.value == pytest.approx(0.0, abs=1e-12)
    assert entropy(full.attaining_input) == pytest.approx(2.0, abs=1e-12)


def test_xor_mirror_half_constraint():
    est = capacity_mirror_ascent(xor_channel(2), (0,), KnowledgeSet(1.5), restarts=4, seed=0)
    # independent family: one record uniform, the other Bern(q) with H2(q) = 0.5
    assert entropy(est.attaining_input) >= 1.5 - 1e-9
    assert est.value == pytest.approx(0.5, abs=1e-3)
    assert not est.heuristic


def test_mirror_ascent_deterministic():
    ch = random_channel((2, 2), 3, np.random.default_rng(3))
    a = capacity_mirror_ascent(ch, (1,), KnowledgeSet(1.0), seed=5)
    b = capacity_mirror_ascent(ch, (1,), KnowledgeSet(1.0), seed=5)
    np.testing.assert_array_equal(a.attaining_input.mass, b.attaining_input.mass)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.0, 2.0))
def test_repair_reaches_entropy(seed, b):
    p = np.random.default_rng(seed).dirichlet(np.full(4, 0.3))
    q = _repair(p, b)
    assert entropy(q) >= b - 1e-9
    assert q.sum() == pytest.approx(1.0)


def _central_diff(f, p, h=1e-6):
    g = np.empty_like(p)
    for k in range(p.size):
        e = np.zeros_like(p)
        e[k] = h
        g[k] = (f(p + e) - f(p - e)) / (2 * h)
    return g


def test_information_gradient_matches_finite_differences():
    rng = np.random.default_rng(11)
    for _ in range(10):
        ch = random_channel((2, 3), 3, rng)
        target = _Target(ch, (1,))
        p = rng.dirichlet(np.ones(6)) * 0.8 + 0.2 / 6
        _, grad = target.value_and_grad(p)
        fd = _central_diff(lambda q: target.value_and_grad(q)[0], p)
        np.testing.assert_allclose(grad, fd, rtol=1e-5, atol=1e-8)


def test_entropy_gradient_matches_finite_differences():
    p = np.random.default_rng(2).dirichlet(np.ones(5)) * 0.5 + 0.1
    _, grad = _entropy_and_grad(p)
    fd = _central_diff(lambda q: _entropy_and_grad(q)[0], p)
    np.testing.assert_allclose(grad, fd, rtol=1e-6)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_capacity_monotone_in_b(seed):
    ch = random_channel((2, 2), 2, np.random.default_rng(seed))
    vals = [capacity_grid_oracle(ch, (0,), KnowledgeSet(b), resolution=16).value for b in (0.0, 1.0, 2.0)]
    assert vals[0] >= vals[1] - 1e-12 >= vals[2] - 2e-12


def test_individual_capacity_max_over_records():
    # copying x1 into x2 lets both reports speak about x1
    from infopriv.channels import compose_same_input

    ch = randomized_response((2, 2), 0.1)
    est = individual_capacity(ch, method="exact")
    two_views = blahut_arimoto(compose_same_input(bsc(0.1), bsc(0.1))).value
    assert est.value == pytest.approx(two_views, abs=1e-6)
    assert est.value > 1 - h2(0.1)


def test_estimate_json_shape():
    d = exact_capacity(xor_channel(2), (1,)).to_dict()
    assert set(d) >= {"value", "bracket", "method", "attaining_input", "knowledge"}
    assert d["target"] == [1]


def _fixtures_2x2():
    rng = np.random.default_rng(21)
    return [xor_channel(2), constant_channel((2, 2), 2), randomized_response((2, 2), 0.2)] + [
        random_channel((2, 2), 2, rng) for _ in range(4)]


@pytest.mark.parametrize("idx", range(7))
def test_mirror_matches_exact_unconstrained(idx):
    ch = _fixtures_2x2()[idx]
    for i in range(2):
        ex = exact_capacity(ch, (i,))
        mi = capacity_mirror_ascent(ch, (i,), KnowledgeSet(), restarts=4, seed=0)
        assert mi.value == pytest.approx(ex.value, abs=1e-4)
        assert mi.value <= mi.upper


def test_group_capacities_nested():
    ch = random_channel((2, 2, 2), 3, np.random.default_rng(8))
    vals = [group_capacity(ch, k, KnowledgeSet(), "exact").value for k in (1, 2, 3)]
    assert vals[0] <= vals[1] + 1e-9 <= vals[2] + 2e-9


def test_full_group_equals_blahut_arimoto():
    ch = random_channel((2, 2), 3, np.random.default_rng(9))
    full = group_capacity(ch, 2, KnowledgeSet(), "exact").value
    assert full == pytest.approx(blahut_arimoto(ch).value, abs=1e-8)


def test_estimates_reproduce_lower_bound():
    ch = random_channel((2, 2), 3, np.random.default_rng(10))
    from infopriv.capacity import information

    for method, ks in (("exact", KnowledgeSet()), ("grid", KnowledgeSet(1.0)), ("mirror", KnowledgeSet(1.0))):
        est = capacity(ch, (0,), ks, method)
        assert information(ch, est.attaining_input, (0,)) == pytest.approx(est.lower, abs=1e-9)
        assert entropy(est.attaining_input) >= ks.b - 1e-9
