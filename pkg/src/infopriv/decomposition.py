"""Explicit input-law constructions behind the chain-rule decompositions.

Each ``verify_*`` function evaluates a mutual information two ways: directly,
and as a weighted sum of mutual informations of *new* input laws fed through
(possibly induced) channels.  The residual between the two is pure floating
point error when the constructions are right.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .capacity import information
from .channels import (
    MatrixUniverse,
    PrivacyChannel,
    compose_independent,
    compose_same_input,
    induced_channel,
    induced_input,
    lift_channel,
    output_distribution,
)
from .errors import ConditioningError, DimensionError
from .probability import JointDistribution, normalize_index_set, unflatten


def condition_on_records(p: JointDistribution, index_set: Iterable[int], assignment: Sequence[int]) -> JointDistribution:
    """Law ``q`` on the full universe with ``X_I`` pinned to ``assignment`` and
    ``q(x_(I) | x_I) = p(x_(I) | x_I)``."""
    idx = normalize_index_set(p.shape, index_set)
    assignment = tuple(int(a) for a in assignment)
    if len(assignment) != len(idx):
        raise DimensionError(f"assignment {assignment} does not match records {idx}")
    mask = np.ones(p.shape.alphabet_sizes, dtype=bool)
    for i, a in zip(idx, assignment):
        if not 0 <= a < p.shape.alphabet_sizes[i]:
            raise DimensionError(f"value {a} outside alphabet of record {i}")
        sel = [None] * p.shape.n
        sel[i] = slice(None)
        axis_mask = np.arange(p.shape.alphabet_sizes[i]) == a
        mask &= axis_mask[tuple(sel)]
    q = np.where(mask, p.table(), 0.0).reshape(-1)
    total = q.sum()
    if total <= 0:
        raise ConditioningError(f"records {idx} = {assignment} has probability zero")
    return JointDistribution(p.shape, q / total)


def posterior_update(p: JointDistribution, ch: PrivacyChannel, y: int) -> JointDistribution:
    """Bayes posterior ``q(x) = p(x) p(y|x) / p(y)`` after observing ``y``."""
    if ch.input_shape != p.shape:
        raise DimensionError("channel and prior live on different universes")
    if not 0 <= y < ch.output_size:
        raise DimensionError(f"output symbol {y} outside [0, {ch.output_size})")
    w = p.mass * ch.rows[:, y]
    total = w.sum()
    if total <= 0:
        raise ConditioningError(f"output {y} has probability zero")
    return JointDistribution(p.shape, w / total)


@dataclass
class DecompositionReport:
    """Left side, labelled right-side terms ``(label, weight, bits)`` and residual."""

    lemma: str
    lhs: float
    terms: list
    trial: dict = field(default_factory=dict)
    skipped: int = 0

    @property
    def rhs(self) -> float:
        return float(sum(w * v for _, w, v in self.terms))

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "lhs": self.lhs,
            "rhs_terms": [{"label": lab, "weight": w, "bits": v} for lab, w, v in self.terms],
            "rhs": self.rhs,
            "residual": self.residual,
            "skipped_zero_mass": self.skipped,
            "trial": self.trial,
        }


def _assignments(p: JointDistribution, idx: tuple):
    sub = p.shape.sub(idx)
    for f in range(sub.total_size):
        yield unflatten(sub, f)


def _weight_of(p: JointDistribution, idx: tuple, a: tuple) -> float:
    t = p.table()
    sel = [slice(None)] * p.shape.n
    for i, v in zip(idx, a):
        sel[i] = v
    return float(t[tuple(sel)].sum())


def verify_group_decomposition(ch: PrivacyChannel, p: JointDistribution, first, second,
                               trial: dict = None) -> DecompositionReport:
    """``I(X_I;Y) = I(X_I1;Y) + sum_a p(a) I(X_I2; Y)`` under the pinned laws."""
    i1 = normalize_index_set(p.shape, first)
    i2 = normalize_index_set(p.shape, second)
    if set(i1) & set(i2):
        raise DimensionError("record sets must be disjoint")
    lhs = information(ch, p, i1 + i2)
    terms = [(f"I(X_{list(i1)};Y)", 1.0, information(ch, p, i1))]
    skipped = 0
    for a in _assignments(p, i1):
        w = _weight_of(p, i1, a)
        if w <= 0:
            skipped += 1
            continue
        q = condition_on_records(p, i1, a)
        terms.append((f"I(X_{list(i2)}^{{x={list(a)}}};Y^{{x={list(a)}}})", w, information(ch, q, i2)))
    return DecompositionReport("group", lhs, terms, trial or {}, skipped)


def verify_basic_decomposition(ch1: PrivacyChannel, ch2: PrivacyChannel, p: JointDistribution, i: int,
                               trial: dict = None) -> DecompositionReport:
    """``I(X_i;Y1,Y2) = I(X_i;Y2) + sum_y2 p(y2) I(X_i;Y1)`` under the posteriors."""
    composed = compose_same_input(ch1, ch2)
    idx = normalize_index_set(p.shape, (i,))
    lhs = information(composed, p, idx)
    terms = [("I(X_i;Y2)", 1.0, information(ch2, p, idx))]
    py2 = output_distribution(ch2, p).mass
    skipped = 0
    for y2 in range(ch2.output_size):
        if py2[y2] <= 0:
            skipped += 1
            continue
        q = posterior_update(p, ch2, y2)
        terms.append((f"I(X_i^{{y2={y2}}};Y1^{{y2={y2}}})", float(py2[y2]), information(ch1, q, idx)))
    return DecompositionReport("basic", lhs, terms, trial or {}, skipped)


def cross_information(ch: PrivacyChannel, q: JointDistribution, source_slots, record_slot) -> float:
    """``I(X_r; Y)`` where ``Y`` is produced by ``ch`` (a channel on the full
    matrix universe) and ``X_r`` lives in another dataset, computed through the
    induced cross channel ``p(y | x^source)``."""
    cross = induced_channel(ch, q, source_slots)
    law = induced_input(q, cross, source_slots)
    if cross.source_rows is None:
        pos = tuple(source_slots).index(record_slot)
        return information(cross, law, (pos,))
    # rows were dropped: recover the record coordinate of each surviving row
    sub = q.shape.sub(source_slots)
    pos = tuple(source_slots).index(record_slot)
    labels = np.array([unflatten(sub, f)[pos] for f in cross.source_rows])
    joint = np.zeros((sub.alphabet_sizes[pos], cross.output_size))
    np.add.at(joint, labels, law.mass[:, None] * cross.rows)
    from .probability import mutual_information

    return mutual_information(joint)


def verify_general_decomposition(ch1: PrivacyChannel, ch2: PrivacyChannel, p: JointDistribution, i: int,
                                 trial: dict = None) -> DecompositionReport:
    """Four-group expansion of ``I(X_i; Y1, Y2)`` for two datasets.

    ``X_i = (X_i^1, X_i^2)``; ``ch1`` reads dataset 1 and ``ch2`` dataset 2.

    1. ``I(X_i^1; Y1)``
    2. ``sum_a p(a) I(X_i^2; Y1)`` under ``p`` pinned at ``X_i^1 = a``, via the
       induced cross channel ``p(y1 | x^2)``
    3. ``sum_y1 p(y1) I(X_i^1; Y2)`` under the posterior given ``y1``, via the
       induced cross channel ``p(y2 | x^1)``
    4. ``sum_{a,y1} p(a) p(y1|a) I(X_i^2; Y2)``: pin ``X_i^1 = a`` first, then
       condition on ``y1``
    """
    universe = MatrixUniverse((ch1.input_shape, ch2.input_shape))
    if universe.m != 2:
        raise DimensionError("general decomposition is implemented for two datasets")
    shape = universe.shape
    if p.shape != shape:
        raise DimensionError("coupling does not live on the two-dataset universe")
    s1, s2 = universe.dataset_slots(0), universe.dataset_slots(1)
    r1, r2 = universe.individual_slots(i)
    y1ch = lift_channel(ch1, shape, s1)
    y2ch = lift_channel(ch2, shape, s2)
    composed = compose_independent(ch1, ch2)

    lhs = information(composed, p, (r1, r2))
    terms = [("I(X_i^1;Y1)", 1.0, information(y1ch, p, (r1,)))]
    skipped = 0

    px = [_weight_of(p, (r1,), (a,)) for a in range(shape.alphabet_sizes[r1])]
    for a, w in enumerate(px):
        if w <= 0:
            skipped += 1
            continue
        q = condition_on_records(p, (r1,), (a,))
        terms.append((f"I(X_i^{{2,x={a}}};Y1^{{x={a}}})", w, cross_information(y1ch, q, s2, r2)))

    py1 = output_distribution(y1ch, p).mass
    for y1 in range(ch1.output_size):
        if py1[y1] <= 0:
            skipped += 1
            continue
        q = posterior_update(p, y1ch, y1)
        terms.append((f"I(X_i^{{1,y1={y1}}};Y2^{{y1={y1}}})", float(py1[y1]), cross_information(y2ch, q, s1, r1)))

    for a, w in enumerate(px):
        if w <= 0:
            continue
        qa = condition_on_records(p, (r1,), (a,))
        py1_a = output_distribution(y1ch, qa).mass
        for y1 in range(ch1.output_size):
            if py1_a[y1] <= 0:
                skipped += 1
                continue
            q = posterior_update(qa, y1ch, y1)
            terms.append((f"I(X_i^{{2,x={a},y1={y1}}};Y2^{{x={a},y1={y1}}})", w * float(py1_a[y1]),
                          information(y2ch, q, (r2,))))
    return DecompositionReport("general", lhs, terms, trial or {}, skipped)


# ---------------------------------------------------------------------------
# seeded suites

def dirichlet_joint(shape, rng: np.random.Generator, concentration: float = 1.0) -> JointDistribution:
    from .probability import UniverseShape

    shape = shape if isinstance(shape, UniverseShape) else UniverseShape(tuple(shape))
    return JointDistribution(shape, rng.dirichlet(np.full(shape.total_size, concentration)))


def group_suite(trials: int = 100, seed: int = 0, max_outputs: int = 3):
    """Random ``(p, ch)`` on two binary records, ``|Y| <= max_outputs``."""
    from .channels import random_channel

    reports = []
    for t in range(trials):
        rng = np.random.default_rng([int(seed), t])
        outputs = int(rng.integers(2, max_outputs + 1))
        ch = random_channel((2, 2), outputs, rng)
        p = dirichlet_joint((2, 2), rng)
        reports.append(verify_group_decomposition(
            ch, p, (0,), (1,), trial={"trial": t, "seed": int(seed), "outputs": outputs, "I1": [0], "I2": [1]}))
    return reports


def basic_suite(trials: int = 100, seed: int = 0, outputs: int = 2):
    from .channels import random_channel

    reports = []
    for t in range(trials):
        rng = np.random.default_rng([int(seed), t])
        ch1 = random_channel((2, 2), outputs, rng)
        ch2 = random_channel((2, 2), outputs, rng)
        p = dirichlet_joint((2, 2), rng)
        i = int(rng.integers(0, 2))
        reports.append(verify_basic_decomposition(
            ch1, ch2, p, i, trial={"trial": t, "seed": int(seed), "record": i}))
    return reports


def general_suite(trials: int = 50, seed: int = 0, outputs: int = 2):
    """Random couplings of two one-record binary datasets."""
    from .channels import random_channel

    reports = []
    for t in range(trials):
        rng = np.random.default_rng([int(seed), t])
        ch1 = random_channel((2,), outputs, rng)
        ch2 = random_channel((2,), outputs, rng)
        p = dirichlet_joint((2, 2), rng)
        reports.append(verify_general_decomposition(
            ch1, ch2, p, 0, trial={"trial": t, "seed": int(seed), "individual": 0}))
    return reports


SUITES = {"group": group_suite, "basic": basic_suite, "general": general_suite}
