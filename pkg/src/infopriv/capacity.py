"""Individual and group channel capacities.

The quantity computed everywhere is

    C(I, b) = max { I(X_I; Y) : p(x) on the universe, H(X) >= b }

for a channel ``p(y|x)`` and an index set ``I``.  Three methods are offered:

``exact_enum_ba``
    Unconstrained sets only.  For a fixed law of ``X_I``, ``I(X_I;Y)`` is
    convex in the induced rows ``p(y|x_I) = sum p(x_(I)|x_I) p(y|x)``, which are
    linear in the conditional law of the remaining records.  The maximum over
    conditionals therefore sits at a vertex: a deterministic map
    ``g: X_I -> X_(I)``.  Enumerating every ``g`` and running Blahut-Arimoto on
    the induced channel ``x_I -> p(y|x_I, g(x_I))`` is exact up to the
    Blahut-Arimoto bracket.
``grid``
    Brute force over all lattice points ``counts / G`` of the simplex.  The
    lower end of the bracket is the best feasible lattice point.  The upper
    end uses entropy continuity: every point of the simplex is within ``1/G``
    per coordinate of a lattice point, so each entropy in
    ``I = H(X_I) + H(Y) - H(X_I, Y)`` (and ``H(X)`` itself, for the
    feasibility test) moves by at most the local modulus of ``-t log t`` on
    the corresponding interval.  The maximum of ``I + dI`` over lattice points
    whose relaxed entropy ``H + dH`` reaches ``b`` bounds the true capacity.
``mirror_ascent``
    Exponentiated-gradient ascent on the joint simplex with a quadratic
    entropy penalty, escalated until the constraint holds, then repaired by
    mixing with the uniform law so the reported point is feasible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

import numpy as np

from .channels import PrivacyChannel, joint_io
from .errors import InfeasibleError
from .probability import (
    JointDistribution,
    UniverseShape,
    entropy,
    mutual_information,
    normalize_index_set,
    xlogx,
)

LN2 = math.log(2.0)
DEFAULT_ENUM_CAP = 10**6
DEFAULT_GRID_CAP = 2 * 10**6
BA_TOL = 1e-9
BA_MAX_ITER = 200_000
TIE_TOL = 1e-12
# lattice points with H(p) >= b - FEASIBILITY_SLACK count as feasible (float fuzz at the uniform point)
FEASIBILITY_SLACK = 1e-12

METHOD_ALIASES = {
    "grid": "grid",
    "exact": "exact_enum_ba",
    "exact_enum_ba": "exact_enum_ba",
    "mirror": "mirror_ascent",
    "mirror_ascent": "mirror_ascent",
}


@dataclass(frozen=True)
class KnowledgeSet:
    """Adversary knowledge allowed: all laws with ``H(X) >= b`` bits.

    ``b = 0`` is the unconstrained set.
    """

    b: float = 0.0

    def __post_init__(self):
        b = float(self.b)
        if not b >= 0.0 or math.isinf(b):
            raise ValueError(f"entropy bound must be a finite non-negative number, got {self.b}")
        object.__setattr__(self, "b", b)

    @classmethod
    def unconstrained(cls) -> "KnowledgeSet":
        return cls(0.0)

    @classmethod
    def entropy_lower_bound(cls, b: float) -> "KnowledgeSet":
        return cls(b)

    @property
    def is_unconstrained(self) -> bool:
        return self.b == 0.0

    def check(self, shape: UniverseShape) -> None:
        top = math.log2(shape.total_size)
        if self.b > top + 1e-12:
            raise ValueError(f"b = {self.b} exceeds log2|X| = {top}")

    def to_dict(self) -> dict:
        return {"set": "P" if self.is_unconstrained else "Pb", "b": self.b}


@dataclass(frozen=True, eq=False)
class CapacityEstimate:
    """A capacity value with a certified bracket ``[lower, upper]`` in bits.

    ``value`` is the mutual information actually attained at
    ``attaining_input``; it is always the lower end of the bracket.
    ``heuristic`` marks brackets whose upper end is unknown (``inf``).
    """

    value: float
    attaining_input: JointDistribution
    target: tuple
    method: str
    lower: float
    upper: float
    knowledge: KnowledgeSet = field(default_factory=KnowledgeSet)
    heuristic: bool = False
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.lower <= self.value <= self.upper:
            raise ValueError(f"inconsistent bracket {self.lower} <= {self.value} <= {self.upper}")

    @property
    def error_bracket(self) -> tuple:
        return (self.lower, self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def tightened(self, upper: float, source: str) -> "CapacityEstimate":
        """Same estimate with the upper end lowered to ``upper`` if that is tighter."""
        if upper >= self.upper:
            return self
        upper = max(upper, self.value)
        details = dict(self.details)
        details["upper_from"] = source
        return replace(self, upper=upper, heuristic=False, details=details)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "bracket": {"lower": self.lower, "upper": None if math.isinf(self.upper) else self.upper},
            "heuristic": self.heuristic,
            "method": self.method,
            "target": [int(i) for i in self.target],
            "knowledge": self.knowledge.to_dict(),
            "attaining_input": {
                "alphabets": list(self.attaining_input.shape.alphabet_sizes),
                "mass": self.attaining_input.mass.tolist(),
            },
            "details": self.details,
        }


def information(ch: PrivacyChannel, x: JointDistribution, index_set: Iterable[int]) -> float:
    """``I(X_I; Y)`` in bits under input law ``x``."""
    return mutual_information(joint_io(ch, x, index_set))


def _pick(cands):
    """Best candidate by value; near-ties go to the lexicographically smallest mass."""
    best = max(c[0] for c in cands)
    tied = [c for c in cands if c[0] >= best - TIE_TOL]
    return min(tied, key=lambda c: tuple(c[1].tolist()))


# ---------------------------------------------------------------------------
# Blahut-Arimoto

def _kl_rows(rows: np.ndarray, q: np.ndarray) -> np.ndarray:
    """``D(rows[x] || q)`` for every row, in bits."""
    pos = rows > 0
    ratio = np.ones_like(rows)
    with np.errstate(divide="ignore"):
        ratio[pos] = rows[pos] / np.broadcast_to(q, rows.shape)[pos]
    return np.sum(np.where(pos, rows * np.log2(ratio), 0.0), axis=1)


def _ba_rows(rows: np.ndarray, tol: float = BA_TOL, max_iter: int = BA_MAX_ITER):
    """Blahut-Arimoto on a stochastic matrix.

    Returns ``(lower, upper, r, iterations)``: ``lower = I(r)`` at the best
    input seen, ``upper = min_t max_x D(W_x || q_t)``, the classical bound.
    """
    k = rows.shape[0]
    r = np.full(k, 1.0 / k)
    best_lower, best_r, best_upper = -np.inf, r, np.inf
    it = 0
    for it in range(1, max_iter + 1):
        q = r @ rows
        d = _kl_rows(rows, q)
        lower = float(r @ d)
        upper = float(d.max())
        if lower > best_lower:
            best_lower, best_r = lower, r
        best_upper = min(best_upper, upper)
        if best_upper - best_lower <= tol:
            break
        w = r * np.exp2(d - upper)
        r = w / w.sum()
    best_lower = max(best_lower, 0.0)
    best_upper = max(best_upper, best_lower)
    return best_lower, best_upper, best_r, it


def blahut_arimoto(ch: PrivacyChannel, tol: float = BA_TOL, max_iter: int = BA_MAX_ITER) -> CapacityEstimate:
    """Capacity ``max_p I(X; Y)`` treating the whole dataset as one input symbol."""
    lower, upper, r, iters = _ba_rows(ch.rows, tol, max_iter)
    x = JointDistribution(ch.input_shape, r)
    value = information(ch, x, range(ch.n))
    lower = value
    upper = max(upper, value)
    return CapacityEstimate(value, x, tuple(range(ch.n)), "exact_enum_ba", lower, upper,
                            details={"iterations": iters})


# ---------------------------------------------------------------------------
# exact enumeration over deterministic complements

def _split_tensor(ch: PrivacyChannel, idx: tuple):
    """Channel as an ``(|X_I|, |X_(I)|, |Y|)`` array plus the flat-index map back."""
    sizes = ch.input_shape.alphabet_sizes
    comp = tuple(i for i in range(len(sizes)) if i not in idx)
    a = int(np.prod([sizes[i] for i in idx]))
    c = int(np.prod([sizes[i] for i in comp])) if comp else 1
    perm = idx + comp
    t = np.transpose(ch.tensor(), perm + (len(sizes),)).reshape(a, c, ch.output_size)
    flat = np.arange(ch.input_shape.total_size).reshape(sizes)
    flat = np.transpose(flat, perm).reshape(a, c)
    return t, flat


def enumeration_size(ch: PrivacyChannel, index_set) -> int:
    idx = normalize_index_set(ch.input_shape, index_set)
    sizes = ch.input_shape.alphabet_sizes
    a = int(np.prod([sizes[i] for i in idx]))
    c = int(np.prod([sizes[i] for i in range(len(sizes)) if i not in idx])) if len(idx) < len(sizes) else 1
    return c ** a


def exact_capacity(ch: PrivacyChannel, index_set, enum_cap: int = DEFAULT_ENUM_CAP,
                   tol: float = BA_TOL) -> CapacityEstimate:
    """Unconstrained ``max_p I(X_I; Y)`` by deterministic-complement enumeration."""
    idx = normalize_index_set(ch.input_shape, index_set)
    count = enumeration_size(ch, idx)
    if count > enum_cap:
        raise InfeasibleError(
            f"exact enumeration needs {count} complement maps, above enum_cap={enum_cap}; "
            "use mirror ascent instead", cap="enum_cap", fallback="mirror")
    t, flat = _split_tensor(ch, idx)
    a, c, _ = t.shape
    cands = []
    upper_all = 0.0
    for g in itertools.product(range(c), repeat=a):
        g = np.asarray(g, dtype=int)
        rows = t[np.arange(a), g]
        lower, upper, r, _ = _ba_rows(rows, tol)
        upper_all = max(upper_all, upper)
        mass = np.zeros(ch.input_shape.total_size)
        mass[flat[np.arange(a), g]] = r
        cands.append((lower, mass))
    _, mass = _pick(cands)
    x = JointDistribution(ch.input_shape, mass)
    value = information(ch, x, idx)
    return CapacityEstimate(value, x, idx, "exact_enum_ba", value, max(upper_all, value),
                            details={"maps": count})


def individual_capacity_unconstrained(ch: PrivacyChannel, i: int, enum_cap: int = DEFAULT_ENUM_CAP) -> CapacityEstimate:
    """``max_p I(X_i; Y)`` over all input laws, exactly."""
    return exact_capacity(ch, (i,), enum_cap=enum_cap)


# ---------------------------------------------------------------------------
# lattice-point oracle

def grid_size(resolution: int, k: int) -> int:
    return math.comb(resolution + k - 1, k - 1)


def default_resolution(k: int) -> int:
    """64 up to four inputs, 16 up to eight, 8 beyond; always a multiple of ``k``
    (up to eight) so the uniform law is a lattice point."""
    if k <= 2:
        return 256
    if k <= 4:
        g = 64
    elif k <= 8:
        g = 16
    else:
        return 8
    return g - g % k


def compositions(total: int, parts: int) -> np.ndarray:
    """All vectors of ``parts`` non-negative integers summing to ``total`` (stars and bars)."""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    bars = np.array(list(itertools.combinations(range(total + parts - 1), parts - 1)), dtype=np.int64)
    edges = np.hstack([np.full((bars.shape[0], 1), -1), bars, np.full((bars.shape[0], 1), total + parts - 1)])
    return np.diff(edges, axis=1) - 1


def _eta(t):
    return -xlogx(t)


def entropy_modulus(q: np.ndarray, e: np.ndarray) -> np.ndarray:
    """``max |eta(t) - eta(q)|`` over ``t in [q - e, q + e] & [0, 1]`` with ``eta(t) = -t log2 t``."""
    q = np.asarray(q, dtype=float)
    e = np.broadcast_to(np.asarray(e, dtype=float), q.shape)
    lo = np.clip(q - e, 0.0, 1.0)
    hi = np.clip(q + e, 0.0, 1.0)
    eq, elo, ehi = _eta(q), _eta(lo), _eta(hi)
    peak_at = 1.0 / math.e
    peak = np.where((lo <= peak_at) & (hi >= peak_at), _eta(np.array(peak_at)), np.maximum(elo, ehi))
    return np.maximum(eq - np.minimum(elo, ehi), peak - eq)


class _Target:
    """Precomputed matrices for evaluating ``I(X_I;Y)`` on many flat input laws."""

    def __init__(self, ch: PrivacyChannel, idx: tuple):
        self.ch = ch
        self.idx = idx
        sizes = ch.input_shape.alphabet_sizes
        sub = ch.input_shape.sub(idx)
        self.a = sub.total_size
        coords = np.array(np.unravel_index(np.arange(ch.input_shape.total_size), sizes)).T
        group = np.ravel_multi_index(coords[:, list(idx)].T, sub.alphabet_sizes)
        self.member = np.zeros((ch.input_shape.total_size, self.a))
        self.member[np.arange(ch.input_shape.total_size), group] = 1.0
        self.w = ch.rows
        self.cap = math.log2(min(self.a, ch.output_size)) if min(self.a, ch.output_size) > 1 else 0.0

    def batch(self, p: np.ndarray, spread: Optional[float] = None):
        """Information (and its continuity bound when ``spread`` is given) for rows of ``p``."""
        joint = np.einsum("nk,ky,ka->nay", p, self.w, self.member)
        pa = p @ self.member
        py = p @ self.w
        info = xlogx(joint).sum(axis=(1, 2)) - xlogx(pa).sum(axis=1) - xlogx(py).sum(axis=1)
        info = np.maximum(info, 0.0)
        if spread is None:
            return info
        e_a = self.member.sum(axis=0) * spread
        e_y = self.w.sum(axis=0) * spread
        e_ay = (self.member.T @ self.w) * spread
        err = (entropy_modulus(joint, e_ay[None]).sum(axis=(1, 2))
               + entropy_modulus(pa, e_a[None]).sum(axis=1)
               + entropy_modulus(py, e_y[None]).sum(axis=1))
        return info, err

    def value_and_grad(self, p: np.ndarray):
        """``I`` and its gradient for ``I`` extended to the positive orthant."""
        joint = self.member.T @ (p[:, None] * self.w)
        pa = p @ self.member
        py = p @ self.w
        info = float(xlogx(joint).sum() - xlogx(pa).sum() - xlogx(py).sum())
        denom = pa[:, None] * py[None, :]
        pos = (joint > 0) & (denom > 0)
        log_ratio = np.zeros_like(joint)
        log_ratio[pos] = np.log2(joint[pos] / denom[pos])
        grad = np.sum(self.w * (self.member @ log_ratio), axis=1) - 1.0 / LN2
        return info, grad


@dataclass(frozen=True, eq=False)
class GridTable:
    """Per-lattice-point information and entropy with their continuity bounds."""

    target: tuple
    resolution: int
    points: np.ndarray
    info: np.ndarray
    info_err: np.ndarray
    ent: np.ndarray
    ent_err: np.ndarray
    info_cap: float


def grid_table(ch: PrivacyChannel, index_set, resolution: Optional[int] = None,
               grid_cap: int = DEFAULT_GRID_CAP, chunk: int = 1 << 15) -> GridTable:
    """Evaluate every lattice point once; reusable across entropy bounds."""
    idx = normalize_index_set(ch.input_shape, index_set)
    k = ch.input_shape.total_size
    g = default_resolution(k) if resolution is None else int(resolution)
    if g < 1:
        raise ValueError("grid resolution must be positive")
    size = grid_size(g, k)
    if size > grid_cap:
        raise InfeasibleError(
            f"grid of resolution {g} over {k} inputs has {size} points, above grid_cap={grid_cap}; "
            "use mirror ascent instead", cap="grid_cap", fallback="mirror")
    target = _Target(ch, idx)
    points = compositions(g, k) / g
    spread = 1.0 / g
    info = np.empty(len(points))
    info_err = np.empty(len(points))
    for s in range(0, len(points), chunk):
        info[s:s + chunk], info_err[s:s + chunk] = target.batch(points[s:s + chunk], spread)
    ent = -xlogx(points).sum(axis=1)
    ent_err = entropy_modulus(points, spread).sum(axis=1)
    return GridTable(idx, g, points, info, info_err, ent, ent_err, target.cap)


def estimate_from_table(table: GridTable, ch: PrivacyChannel, ks: KnowledgeSet) -> CapacityEstimate:
    """Bracket ``C(I, b)`` from a precomputed lattice table."""
    feasible = table.ent >= ks.b - FEASIBILITY_SLACK
    if not np.any(feasible):
        raise InfeasibleError(
            f"no lattice point of resolution {table.resolution} has entropy >= {ks.b}; "
            "use a resolution divisible by |X|", cap="resolution", fallback="mirror")
    vals = np.where(feasible, table.info, -np.inf)
    best = vals.max()
    tied = np.flatnonzero(vals >= best - TIE_TOL)
    order = np.lexsort(table.points[tied].T[::-1])
    pick = tied[order[0]]
    x = JointDistribution(ch.input_shape, table.points[pick])
    value = information(ch, x, table.target)
    relaxed = table.ent + table.ent_err >= ks.b
    upper = float(np.max(np.where(relaxed, table.info + table.info_err, -np.inf)))
    upper = min(upper, table.info_cap)
    upper = max(upper, value)
    return CapacityEstimate(value, x, table.target, "grid", value, upper, knowledge=ks,
                            details={"resolution": table.resolution, "points": int(len(table.points)),
                                     "grid_error": upper - value})


def capacity_grid_oracle(ch: PrivacyChannel, index_set, ks: KnowledgeSet = KnowledgeSet(),
                         resolution: Optional[int] = None, grid_cap: int = DEFAULT_GRID_CAP) -> CapacityEstimate:
    """Brute-force bracket of ``C(I, b)`` over the lattice of resolution ``G``."""
    ks.check(ch.input_shape)
    return estimate_from_table(grid_table(ch, index_set, resolution, grid_cap), ch, ks)


# ---------------------------------------------------------------------------
# mirror ascent

def _entropy_and_grad(p: np.ndarray):
    pos = p > 0
    logp = np.zeros_like(p)
    logp[pos] = np.log2(p[pos])
    return float(-np.sum(p * logp)), -logp - 1.0 / LN2


def _repair(p: np.ndarray, b: float) -> np.ndarray:
    """Mix with the uniform law just enough to reach ``H >= b`` (entropy is concave
    along the segment and maximal at the uniform end, so bisection is valid)."""
    if entropy(p) >= b:
        return p
    u = np.full_like(p, 1.0 / p.size)
    lo, hi = 0.0, 1.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if entropy((1 - mid) * p + mid * u) >= b:
            hi = mid
        else:
            lo = mid
    return (1 - hi) * p + hi * u


def _ascend(target: _Target, p: np.ndarray, b: float, lam: float, max_iter: int):
    def objective(q):
        info, g = target.value_and_grad(q)
        if b > 0:
            h, gh = _entropy_and_grad(q)
            gap = max(0.0, b - h)
            return info - lam * gap * gap, g + 2.0 * lam * gap * gh
        return info, g

    f, grad = objective(p)
    step = 1.0
    stall = 0
    for _ in range(max_iter):
        z = step * (grad - grad.max())
        cand = p * np.exp(z)
        cand = np.maximum(cand / cand.sum(), 1e-300)
        cand /= cand.sum()
        fc, gc = objective(cand)
        if fc > f:
            stall = stall + 1 if fc - f < 1e-14 else 0
            p, f, grad = cand, fc, gc
            step = min(step * 1.5, 1e4)
            if stall > 25:
                break
        else:
            step *= 0.5
            if step < 1e-14:
                break
    return p


def reference_upper(ch: PrivacyChannel, index_set, ks: KnowledgeSet,
                    enum_cap: int = DEFAULT_ENUM_CAP, grid_cap: int = DEFAULT_GRID_CAP):
    """Best available certified upper bound and where it came from (``inf`` if none)."""
    best, source = math.inf, None
    try:
        est = exact_capacity(ch, index_set, enum_cap=enum_cap)
        best, source = est.upper, "exact_enum_ba"
    except InfeasibleError:
        pass
    try:
        est = capacity_grid_oracle(ch, index_set, ks, grid_cap=grid_cap)
        if est.upper < best:
            best, source = est.upper, "grid"
    except InfeasibleError:
        pass
    return best, source


def capacity_mirror_ascent(ch: PrivacyChannel, index_set, ks: KnowledgeSet = KnowledgeSet(),
                           restarts: int = 4, seed: int = 0, max_iter: int = 3000,
                           enum_cap: int = DEFAULT_ENUM_CAP, grid_cap: int = DEFAULT_GRID_CAP,
                           penalty_rounds: int = 10) -> CapacityEstimate:
    """Multi-start exponentiated-gradient estimate of ``C(I, b)``.

    The entropy penalty weight starts at 1 and grows tenfold per round (at
    most ``penalty_rounds`` rounds) until the violation is below 1e-6.
    Restart ``r`` draws from ``default_rng([seed, r])``; restart 0 starts at
    the uniform law.
    """
    if restarts < 1:
        raise ValueError("need at least one restart")
    ks.check(ch.input_shape)
    idx = normalize_index_set(ch.input_shape, index_set)
    target = _Target(ch, idx)
    k = ch.input_shape.total_size
    b = ks.b
    cands = []
    for r in range(restarts):
        rng = np.random.default_rng([int(seed), r])
        p = np.full(k, 1.0 / k) if r == 0 else rng.dirichlet(np.ones(k))
        lam = 1.0
        for _ in range(penalty_rounds if b > 0 else 1):
            p = _ascend(target, p, b, lam, max_iter)
            if b - entropy(p) < 1e-6:
                break
            lam *= 10.0
        p = _repair(p, b)
        cands.append((float(target.batch(p[None])[0]), p))
    _, mass = _pick(cands)
    x = JointDistribution(ch.input_shape, mass)
    value = information(ch, x, idx)
    upper, source = reference_upper(ch, idx, ks, enum_cap, grid_cap)
    heuristic = math.isinf(upper)
    return CapacityEstimate(value, x, idx, "mirror_ascent", value, max(upper, value), knowledge=ks,
                            heuristic=heuristic,
                            details={"restarts": restarts, "seed": int(seed), "upper_from": source})


# ---------------------------------------------------------------------------
# dispatch

def capacity(ch: PrivacyChannel, index_set, ks: KnowledgeSet = KnowledgeSet(), method: str = "grid",
             resolution: Optional[int] = None, restarts: int = 4, seed: int = 0,
             enum_cap: int = DEFAULT_ENUM_CAP, grid_cap: int = DEFAULT_GRID_CAP) -> CapacityEstimate:
    """``C(I, b)`` for one index set with the named method."""
    method = METHOD_ALIASES.get(method, method)
    ks.check(ch.input_shape)
    if method == "exact_enum_ba":
        if not ks.is_unconstrained:
            raise ValueError("exact enumeration only covers the unconstrained knowledge set")
        return exact_capacity(ch, index_set, enum_cap=enum_cap)
    if method == "grid":
        return capacity_grid_oracle(ch, index_set, ks, resolution=resolution, grid_cap=grid_cap)
    if method == "mirror_ascent":
        return capacity_mirror_ascent(ch, index_set, ks, restarts=restarts, seed=seed,
                                      enum_cap=enum_cap, grid_cap=grid_cap)
    raise ValueError(f"unknown capacity method {method!r}")


def best_of(estimates) -> CapacityEstimate:
    """Maximum over index sets: best value, largest upper end."""
    estimates = list(estimates)
    cands = [(e.value, e.attaining_input.mass, e) for e in estimates]
    best = max(c[0] for c in cands)
    tied = [c for c in cands if c[0] >= best - TIE_TOL]
    chosen = min(tied, key=lambda c: tuple(c[1].tolist()))[2]
    upper = max(e.upper for e in estimates)
    heuristic = any(e.heuristic for e in estimates)
    details = dict(chosen.details)
    details["index_sets"] = len(estimates)
    return replace(chosen, upper=max(upper, chosen.value), heuristic=heuristic, details=details)


def group_capacity(ch: PrivacyChannel, k: int, ks: KnowledgeSet = KnowledgeSet(), method: str = "grid",
                   **kwargs) -> CapacityEstimate:
    """``C_k = max over |I| = k`` of the per-set capacity."""
    n = ch.input_shape.n
    if not 1 <= k <= n:
        raise ValueError(f"group size {k} outside [1, {n}]")
    return best_of(capacity(ch, idx, ks, method, **kwargs) for idx in itertools.combinations(range(n), k))


def individual_capacity(ch: PrivacyChannel, ks: KnowledgeSet = KnowledgeSet(), method: str = "grid",
                        **kwargs) -> CapacityEstimate:
    """``C_1``: the best single record."""
    return group_capacity(ch, 1, ks, method, **kwargs)
