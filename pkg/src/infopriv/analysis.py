"""Balance functions and checkers for the group/composition privacy bounds.

Every inequality is judged on certified brackets.  With ``lhs`` and ``rhs``
intervals and tolerance ``tol``:

* ``holds`` when ``rhs.lower - lhs.upper >= -tol``;
* ``violated`` only when ``lhs.lower > rhs.upper + tol``;
* ``inconclusive`` otherwise.

Wherever a bound is stated for a channel "satisfying eps-information
privacy", eps is taken to be the upper end of the channel's own capacity
bracket: the smallest eps for which the hypothesis is certified.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .capacity import (
    DEFAULT_ENUM_CAP,
    DEFAULT_GRID_CAP,
    METHOD_ALIASES,
    CapacityEstimate,
    KnowledgeSet,
    best_of,
    estimate_from_table,
    exact_capacity,
    grid_table,
    group_capacity,
    information,
)
from .channels import (
    MatrixUniverse,
    PrivacyChannel,
    compose_independent,
    compose_same_input,
    induced_channel,
    lift_channel,
    random_channel,
)
from .errors import InfeasibleError, SamplingError
from .probability import JointDistribution, UniverseShape, entropy, marginal

DEFAULT_TOL = 1e-6
DEFAULT_B_POINTS = 33


def worker_count() -> int:
    """Parallelism cap from ``INFOPRIV_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("INFOPRIV_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn: Callable, items: Sequence) -> list:
    """Ordered map; results never depend on the worker count."""
    items = list(items)
    workers = min(worker_count(), len(items)) if items else 1
    if workers <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class Interval:
    lower: float
    value: float
    upper: float

    @classmethod
    def point(cls, v: float) -> "Interval":
        return cls(v, v, v)

    @classmethod
    def of(cls, est: CapacityEstimate) -> "Interval":
        return cls(est.lower, est.value, est.upper)

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lower + other.lower, self.value + other.value, self.upper + other.upper)

    def scale(self, k: float) -> "Interval":
        return Interval(k * self.lower, k * self.value, k * self.upper)

    def to_dict(self) -> dict:
        return {"lower": self.lower, "value": self.value,
                "upper": None if math.isinf(self.upper) else self.upper}


def judge(lhs: Interval, rhs: Interval, tol: float = DEFAULT_TOL):
    """``(slack, verdict)`` for the claim ``lhs <= rhs``."""
    slack = rhs.lower - lhs.upper
    if slack >= -tol:
        return slack, "holds"
    if lhs.lower > rhs.upper + tol:
        return slack, "violated"
    return slack, "inconclusive"


class ChannelAnalysis:
    """Cached capacities of one channel under a fixed method configuration.

    Unconstrained capacities always come from exact enumeration when its cap
    allows; constrained upper ends are additionally clipped by them, since
    shrinking the knowledge set cannot raise a capacity.
    """

    def __init__(self, ch: PrivacyChannel, method: str = "grid", resolution: Optional[int] = None,
                 restarts: int = 4, seed: int = 0, enum_cap: int = DEFAULT_ENUM_CAP,
                 grid_cap: int = DEFAULT_GRID_CAP):
        self.ch = ch
        self.method = METHOD_ALIASES.get(method, method)
        self.resolution = resolution
        self.restarts = restarts
        self.seed = seed
        self.enum_cap = enum_cap
        self.grid_cap = grid_cap
        self._exact = {}
        self._tables = {}
        self._constrained = {}

    @property
    def log_size(self) -> float:
        return math.log2(self.ch.input_shape.total_size)

    def _index_sets(self, k):
        return itertools.combinations(range(self.ch.n), k)

    def unconstrained(self, k: int = 1) -> CapacityEstimate:
        if k not in self._exact:
            try:
                est = best_of(exact_capacity(self.ch, idx, enum_cap=self.enum_cap) for idx in self._index_sets(k))
            except InfeasibleError:
                method = "mirror_ascent" if self.method == "exact_enum_ba" else self.method
                est = self._by_method(k, KnowledgeSet(), method)
            self._exact[k] = est
        return self._exact[k]

    def warm(self) -> None:
        """Fill the shared caches up front so parallel callers only read them."""
        self.unconstrained(1)
        if self.method == "grid":
            for idx in self._index_sets(1):
                self._table(idx)

    def _table(self, idx):
        if idx not in self._tables:
            self._tables[idx] = grid_table(self.ch, idx, self.resolution, self.grid_cap)
        return self._tables[idx]

    def _by_method(self, k, ks, method):
        if method == "grid":
            return best_of(estimate_from_table(self._table(idx), self.ch, ks) for idx in self._index_sets(k))
        if method == "mirror_ascent":
            return group_capacity(self.ch, k, ks, "mirror", restarts=self.restarts, seed=self.seed,
                                  enum_cap=self.enum_cap, grid_cap=self.grid_cap)
        raise ValueError(f"method {method!r} cannot handle an entropy constraint")

    def constrained(self, k: int, b: float) -> CapacityEstimate:
        """Bracket of ``C_k`` over ``P_b``."""
        key = (k, float(b))
        if key not in self._constrained:
            ks = KnowledgeSet(b)
            ks.check(self.ch.input_shape)
            if ks.is_unconstrained:
                est = self.unconstrained(k)
            else:
                est = self._by_method(k, ks, self.method)
                est = est.tightened(self.unconstrained(k).upper, "unconstrained_exact")
            self._constrained[key] = est
        return self._constrained[key]

    def delta(self, b: float) -> Interval:
        """Balance value ``C_1 - C_1^b`` with its bracket."""
        full, cons = self.unconstrained(1), self.constrained(1, b)
        return Interval(full.lower - cons.upper, full.value - cons.value, full.upper - cons.lower)


# ---------------------------------------------------------------------------
# balance function

@dataclass
class BalanceProfile:
    channel_id: str
    b_grid: np.ndarray
    delta: list
    unconstrained: CapacityEstimate
    constrained: list
    method: str
    resolution: Optional[int] = None
    log_size: float = 0.0
    max_record_log: float = 0.0

    @property
    def delta_lower(self) -> np.ndarray:
        return np.array([d.lower for d in self.delta])

    @property
    def delta_upper(self) -> np.ndarray:
        return np.array([d.upper for d in self.delta])

    @property
    def delta_value(self) -> np.ndarray:
        return np.array([d.value for d in self.delta])

    def at(self, b: float) -> Interval:
        hit = np.flatnonzero(np.isclose(self.b_grid, b, rtol=0, atol=1e-12))
        if hit.size == 0:
            raise KeyError(f"b = {b} is not on the profile grid")
        return self.delta[int(hit[0])]

    def to_dict(self) -> dict:
        return {
            "channel": self.channel_id,
            "method": self.method,
            "resolution": self.resolution,
            "log_size": self.log_size,
            "unconstrained_capacity": self.unconstrained.to_dict(),
            "points": [
                {"b": float(b), "delta": d.to_dict(),
                 "constrained_capacity": {"lower": c.lower, "value": c.value, "upper": c.upper}}
                for b, d, c in zip(self.b_grid, self.delta, self.constrained)
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["b", "delta_lower", "delta_upper"])
        for b, d in zip(self.b_grid, self.delta):
            writer.writerow([format(float(b), ".17g"), format(float(d.lower), ".17g"), format(float(d.upper), ".17g")])
        return buf.getvalue()


def balance_profile(ch: PrivacyChannel, grid_points: int = DEFAULT_B_POINTS, method: str = "grid",
                    channel_id: str = "channel", analysis: Optional[ChannelAnalysis] = None,
                    **kwargs) -> BalanceProfile:
    """Sample ``delta(b) = C_1^P - C_1^{P_b}`` on ``grid_points`` equally spaced
    values of ``b`` from 0 to ``log2 |X|``."""
    if grid_points < 2:
        raise ValueError("the b-grid needs at least its two endpoints")
    an = analysis or ChannelAnalysis(ch, method, **kwargs)
    an.warm()
    top = an.log_size
    b_grid = np.linspace(0.0, top, grid_points)
    b_grid[-1] = top
    cons = parallel_map(lambda b: an.constrained(1, float(b)), b_grid)
    full = an.unconstrained(1)
    delta = [Interval(full.lower - c.upper, full.value - c.value, full.upper - c.lower) for c in cons]
    return BalanceProfile(channel_id, b_grid, delta, full, cons, an.method, an.resolution, top,
                          max(math.log2(s) for s in ch.input_shape.alphabet_sizes))


def invert_balance(profile: BalanceProfile, delta_star: float) -> float:
    """Largest grid ``b`` whose certified ``delta(b)`` upper end is at most ``delta_star``."""
    if delta_star < 0:
        raise ValueError("target balance must be non-negative")
    ok = np.flatnonzero(profile.delta_upper <= delta_star)
    if ok.size == 0:
        return 0.0
    return float(profile.b_grid[ok.max()])


# ---------------------------------------------------------------------------
# reports

@dataclass
class TheoremReport:
    theorem: str
    trials: list = field(default_factory=list)
    tol: float = DEFAULT_TOL
    findings: dict = field(default_factory=dict)

    def add(self, lhs: Interval, rhs: Interval, **meta) -> dict:
        slack, verdict = judge(lhs, rhs, self.tol)
        trial = {"lhs": lhs.to_dict(), "rhs": rhs.to_dict(), "slack": slack, "verdict": verdict}
        trial.update(meta)
        self.trials.append(trial)
        return trial

    def extend(self, other: "TheoremReport", **meta) -> None:
        for t in other.trials:
            t = dict(t)
            t.update(meta)
            self.trials.append(t)

    @property
    def counts(self) -> dict:
        out = {"holds": 0, "inconclusive": 0, "violated": 0}
        for t in self.trials:
            out[t["verdict"]] += 1
        return out

    @property
    def verdict(self) -> str:
        c = self.counts
        if c["violated"]:
            return "violated"
        if c["inconclusive"]:
            return "inconclusive"
        return "holds"

    def to_dict(self) -> dict:
        return {"theorem": self.theorem, "verdict": self.verdict, "counts": self.counts,
                "tol": self.tol, "findings": self.findings, "trials": self.trials}


def check_monotonicity(profile: BalanceProfile, tol: float = DEFAULT_TOL) -> TheoremReport:
    """``delta`` non-decreasing on the grid with ``delta(0) = 0``; the endpoint
    bound ``delta(log|X|) <= min{log|X|, max_i log|X_i|}`` is classified as
    ``strict``, ``boundary-equality``, ``exceeded`` or ``inconclusive``."""
    rep = TheoremReport("monotonicity", tol=tol)
    d0 = profile.delta[0]
    rep.add(Interval(d0.lower, d0.value, d0.upper), Interval.point(0.0), kind="delta0_upper", b=0.0)
    rep.add(Interval.point(0.0), d0, kind="delta0_nonneg", b=0.0)
    for t in range(len(profile.delta) - 1):
        rep.add(profile.delta[t], profile.delta[t + 1], kind="step",
                b=float(profile.b_grid[t]), b_next=float(profile.b_grid[t + 1]))
    end = profile.delta[-1]
    bound = min(profile.log_size, profile.max_record_log)
    if abs(end.value - bound) <= tol:
        status = "boundary-equality"
    elif end.upper < bound - tol:
        status = "strict"
    elif end.lower > bound + tol:
        status = "exceeded"
    else:
        status = "inconclusive"
    rep.findings = {
        "endpoint_delta": end.to_dict(),
        "endpoint_bound": bound,
        "endpoint_status": status,
        "strict_inequality_holds": status == "strict",
        "point_values_nondecreasing": bool(np.all(np.diff(profile.delta_value) >= -tol)),
    }
    return rep


def check_equivalence(ch: PrivacyChannel, b: float, eps: float, analysis: Optional[ChannelAnalysis] = None,
                      tol: float = DEFAULT_TOL, **kwargs) -> TheoremReport:
    """``C_1^P <= eps`` iff ``C_1^{P_b} <= eps - delta(b)``, with ``delta`` built
    from the same two capacity estimates."""
    an = analysis or ChannelAnalysis(ch, **kwargs)
    full, cons = an.unconstrained(1), an.constrained(1, b)
    delta = an.delta(b)
    margin_full = eps - full.value
    margin_cons = (eps - delta.value) - cons.value
    left, right = margin_full >= -tol, margin_cons >= -tol
    rep = TheoremReport("equivalence", tol=tol)
    slack = -abs(margin_full - margin_cons)
    rep.trials.append({
        "b": float(b), "eps": float(eps),
        "lhs": Interval.of(full).to_dict(), "rhs": Interval.of(cons).to_dict(),
        "delta": delta.to_dict(),
        "private_wrt_P": bool(left), "private_wrt_Pb": bool(right),
        "margin_P": margin_full, "margin_Pb": margin_cons,
        "slack": slack, "verdict": "holds" if left == right else "violated",
    })
    return rep


def _eps_plus_delta(an: ChannelAnalysis, b: float) -> Interval:
    """``eps + delta(b)`` with ``eps`` the certified capacity over ``P_b``."""
    eps = an.constrained(1, b).upper
    d = an.delta(b)
    return Interval(eps + d.lower, eps + d.value, eps + d.upper)


def check_group_privacy(ch: PrivacyChannel, b: float, k_range: Optional[Iterable[int]] = None,
                        analysis: Optional[ChannelAnalysis] = None, tol: float = DEFAULT_TOL,
                        **kwargs) -> TheoremReport:
    """``C_k^{P_b} <= k (eps + delta(b))`` for each ``k``."""
    an = analysis or ChannelAnalysis(ch, **kwargs)
    ks = range(1, ch.n + 1) if k_range is None else k_range
    per = _eps_plus_delta(an, b)
    rep = TheoremReport("group", tol=tol)
    for k in ks:
        if not 1 <= k <= ch.n:
            raise ValueError(f"group size {k} outside [1, {ch.n}]")
        lhs = Interval.of(an.constrained(k, b))
        rep.add(lhs, per.scale(k), k=int(k), b=float(b), delta=an.delta(b).to_dict())
    return rep


def check_basic_composition(channels: Sequence[PrivacyChannel], b: float, tol: float = DEFAULT_TOL,
                            **kwargs) -> TheoremReport:
    """``C_1^{P_b}(composed) <= sum_j (eps_j + delta_j)``."""
    composed = compose_same_input(*channels)
    rhs = Interval.point(0.0)
    parts = []
    for ch in channels:
        an = ChannelAnalysis(ch, **kwargs)
        term = _eps_plus_delta(an, b)
        rhs = rhs + term
        parts.append({"eps": an.constrained(1, b).upper, "delta": an.delta(b).to_dict()})
    lhs = Interval.of(ChannelAnalysis(composed, **kwargs).constrained(1, b))
    rep = TheoremReport("basic_comp", tol=tol)
    rep.add(lhs, rhs, b=float(b), channels=parts)
    return rep


# ---------------------------------------------------------------------------
# general composition

COUPLING_FAMILIES = ("product", "correlated", "dirichlet")


def sample_coupling(universe: MatrixUniverse, family: str, b: float, rng: np.random.Generator,
                    max_rejects: int = 1000) -> JointDistribution:
    """One coupling of the two datasets from ``family`` whose per-dataset
    marginals both have entropy at least ``b``."""
    s1, s2 = universe.shapes
    for _ in range(max_rejects + 1):
        if family == "product":
            p = np.outer(rng.dirichlet(np.ones(s1.total_size)), rng.dirichlet(np.ones(s2.total_size)))
        elif family == "correlated":
            if s1 != s2:
                raise ValueError("perfect correlation needs identical dataset universes")
            p = np.diag(rng.dirichlet(np.ones(s1.total_size)))
        elif family == "dirichlet":
            p = rng.dirichlet(np.ones(s1.total_size * s2.total_size)).reshape(s1.total_size, s2.total_size)
        else:
            raise ValueError(f"unknown coupling family {family!r}; choose from {COUPLING_FAMILIES}")
        if entropy(p.sum(axis=1)) >= b and entropy(p.sum(axis=0)) >= b:
            return JointDistribution(universe.shape, p.reshape(-1))
    raise SamplingError(f"no {family} coupling with per-dataset entropy >= {b} after {max_rejects} rejections")


def _cross_capacity(ch_lifted: PrivacyChannel, p: JointDistribution, slots, b: float, **kwargs) -> CapacityEstimate:
    """Individual capacity over ``P_b`` of the induced channel from the dataset
    at ``slots`` to the output of ``ch_lifted``."""
    cross = induced_channel(ch_lifted, p, slots)
    b_eff = min(b, math.log2(cross.input_shape.total_size))
    return ChannelAnalysis(cross, **kwargs).constrained(1, b_eff)


def check_general_composition(ch1: PrivacyChannel, ch2: PrivacyChannel, family: str = "product",
                              b: float = 0.0, trials: int = 10, seed: int = 0, tol: float = DEFAULT_TOL,
                              max_rejects: int = 1000, **kwargs) -> TheoremReport:
    """Two datasets about the same individuals, each queried once.

    Per sampled coupling: ``max_i I(X_i; Y1, Y2)`` against
    ``eps_1 + eps_2 + delta_1 + delta_2 + X_12 + X_21`` where the cross terms
    ``X_12, X_21`` are the capacities over ``P_b`` of the induced channels
    ``p(y1|x^2)`` and ``p(y2|x^1)``, maximized over the sampled family.
    """
    universe = MatrixUniverse((ch1.input_shape, ch2.input_shape))
    shape = universe.shape
    s1, s2 = universe.dataset_slots(0), universe.dataset_slots(1)
    y1ch = lift_channel(ch1, shape, s1)
    y2ch = lift_channel(ch2, shape, s2)
    composed = compose_independent(ch1, ch2)
    an1, an2 = ChannelAnalysis(ch1, **kwargs), ChannelAnalysis(ch2, **kwargs)
    own = _eps_plus_delta(an1, b) + _eps_plus_delta(an2, b)

    couplings = []
    for t in range(trials):
        rng = np.random.default_rng([int(seed), t])
        couplings.append(sample_coupling(universe, family, b, rng, max_rejects))

    def cross_terms(p):
        return (_cross_capacity(y1ch, p, s2, b, **kwargs), _cross_capacity(y2ch, p, s1, b, **kwargs))

    crosses = parallel_map(cross_terms, couplings)
    x12 = Interval(max(c[0].lower for c in crosses), max(c[0].value for c in crosses),
                   max(c[0].upper for c in crosses))
    x21 = Interval(max(c[1].lower for c in crosses), max(c[1].value for c in crosses),
                   max(c[1].upper for c in crosses))
    rhs = own + x12 + x21

    rep = TheoremReport("general_comp", tol=tol)
    for t, (p, (c12, c21)) in enumerate(zip(couplings, crosses)):
        lhs = max(information(composed, p, universe.individual_slots(i)) for i in range(universe.n))
        rep.add(Interval.point(lhs), rhs, trial=t, family=family, b=float(b),
                cross_12=c12.value, cross_21=c21.value, coupling=p.mass.tolist())
    rep.findings = {
        "family": family, "seed": int(seed), "b": float(b),
        "eps_plus_delta": own.to_dict(),
        "cross_12": x12.to_dict(), "cross_21": x21.to_dict(),
        "constant_c": (an1.delta(b) + an2.delta(b) + x12 + x21).to_dict(),
    }
    return rep


# ---------------------------------------------------------------------------
# seeded random suites

def _random_two_record(rng, max_outputs=3):
    outputs = int(rng.integers(2, max_outputs + 1))
    return random_channel((2, 2), outputs, rng)


def group_privacy_suite(trials: int = 20, bs: Sequence[float] = (0.0, 0.5, 1.0), seed: int = 0,
                        tol: float = DEFAULT_TOL, **kwargs) -> TheoremReport:
    """Group bound over random two-record channels and several ``b``."""
    def one(t):
        rng = np.random.default_rng([int(seed), t])
        ch = _random_two_record(rng)
        an = ChannelAnalysis(ch, **kwargs)
        return [(b, check_group_privacy(ch, b, analysis=an, tol=tol)) for b in bs]

    rep = TheoremReport("group", tol=tol)
    for t, results in enumerate(parallel_map(one, range(trials))):
        for b, r in results:
            rep.extend(r, trial=t, seed=int(seed))
    return rep


def basic_composition_suite(trials: int = 20, b: float = 0.0, seed: int = 0, tol: float = DEFAULT_TOL,
                            **kwargs) -> TheoremReport:
    """Basic composition bound over random pairs of two-record binary channels."""
    def one(t):
        rng = np.random.default_rng([int(seed), t])
        ch1 = random_channel((2, 2), 2, rng)
        ch2 = random_channel((2, 2), 2, rng)
        return check_basic_composition([ch1, ch2], b, tol=tol, **kwargs)

    rep = TheoremReport("basic_comp", tol=tol)
    for t, r in enumerate(parallel_map(one, range(trials))):
        rep.extend(r, trial=t, seed=int(seed))
    return rep
