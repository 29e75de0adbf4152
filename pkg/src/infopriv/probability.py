"""Finite-alphabet probability kernel.

Datasets are tuples of records ``x = (x_1, ..., x_n)`` with ``x_i`` drawn from
an alphabet of size ``alphabet_sizes[i]``.  Every distribution over datasets is
stored as a flat mass vector in row-major order (coordinate 0 varies slowest),
which is also the row order of every channel matrix.

All information quantities are in bits and use the convention ``0 log 0 = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ConditioningError, DimensionError, DistributionError

#: Total-mass deviation that is silently renormalized; anything larger is rejected.
NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class UniverseShape:
    """The finite dataset universe: one alphabet size per record slot."""

    alphabet_sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.alphabet_sizes)
        if len(sizes) == 0:
            raise DimensionError("a universe needs at least one record slot")
        if any(s < 1 for s in sizes):
            raise DimensionError(f"alphabet sizes must be positive, got {sizes}")
        object.__setattr__(self, "alphabet_sizes", sizes)

    @property
    def n(self) -> int:
        return len(self.alphabet_sizes)

    @property
    def total_size(self) -> int:
        return int(np.prod(self.alphabet_sizes, dtype=np.int64))

    def flatten(self, coords: Sequence[int]) -> int:
        return flatten(self, coords)

    def unflatten(self, index: int) -> tuple:
        return unflatten(self, index)

    def sub(self, index_set: Iterable[int]) -> "UniverseShape":
        """Shape of the coordinates in ``index_set`` (ascending order)."""
        idx = normalize_index_set(self, index_set)
        return UniverseShape(tuple(self.alphabet_sizes[i] for i in idx))

    def complement(self, index_set: Iterable[int]) -> tuple:
        idx = set(normalize_index_set(self, index_set))
        return tuple(i for i in range(self.n) if i not in idx)

    def __len__(self):
        return self.total_size


def flatten(shape: UniverseShape, coords: Sequence[int]) -> int:
    """Row-major flat index of ``coords``.

    >>> flatten(UniverseShape((2, 3)), (1, 2))
    5
    """
    coords = tuple(coords)
    if len(coords) != shape.n:
        raise DimensionError(f"expected {shape.n} coordinates, got {len(coords)}")
    index = 0
    for c, size in zip(coords, shape.alphabet_sizes):
        c = int(c)
        if not 0 <= c < size:
            raise DimensionError(f"coordinate {c} outside alphabet of size {size}")
        index = index * size + c
    return index


def unflatten(shape: UniverseShape, index: int) -> tuple:
    """Inverse of :func:`flatten`."""
    index = int(index)
    if not 0 <= index < shape.total_size:
        raise DimensionError(f"flat index {index} outside [0, {shape.total_size})")
    coords = []
    for size in reversed(shape.alphabet_sizes):
        index, c = divmod(index, size)
        coords.append(c)
    return tuple(reversed(coords))


def normalize_index_set(shape: UniverseShape, index_set: Iterable[int]) -> tuple:
    """Validate an index set against ``shape`` and return it sorted, deduplicated."""
    if isinstance(index_set, (int, np.integer)):
        index_set = (int(index_set),)
    idx = tuple(sorted({int(i) for i in index_set}))
    if not idx:
        raise DimensionError("index set must be non-empty")
    if idx[0] < 0 or idx[-1] >= shape.n:
        raise DimensionError(f"index set {idx} out of range for {shape.n} records")
    return idx


def validate_mass(mass, expected_size: int = None, tol: float = NORMALIZATION_TOL) -> np.ndarray:
    """Return ``mass`` as a read-only float vector summing to one.

    Deviations of the total from one up to ``tol`` are renormalized away.
    """
    arr = np.array(mass, dtype=float).reshape(-1)
    if expected_size is not None and arr.size != expected_size:
        raise DimensionError(f"mass vector has {arr.size} entries, expected {expected_size}")
    if not np.all(np.isfinite(arr)):
        raise DistributionError("mass vector contains non-finite entries")
    if np.any(arr < 0):
        raise DistributionError(f"negative probability {arr.min()!r}")
    total = arr.sum()
    if abs(total - 1.0) > tol:
        raise DistributionError(f"mass sums to {total!r}, not 1 within {tol}")
    if total != 1.0:
        arr = arr / total
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """A probability vector over the flattened universe ``shape``."""

    shape: UniverseShape
    mass: np.ndarray

    def __post_init__(self):
        shape = self.shape
        if not isinstance(shape, UniverseShape):
            shape = UniverseShape(tuple(shape))
            object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "mass", validate_mass(self.mass, shape.total_size))

    @classmethod
    def uniform(cls, shape) -> "JointDistribution":
        shape = shape if isinstance(shape, UniverseShape) else UniverseShape(tuple(shape))
        return cls(shape, np.full(shape.total_size, 1.0 / shape.total_size))

    @classmethod
    def point(cls, shape, coords) -> "JointDistribution":
        shape = shape if isinstance(shape, UniverseShape) else UniverseShape(tuple(shape))
        mass = np.zeros(shape.total_size)
        mass[flatten(shape, coords)] = 1.0
        return cls(shape, mass)

    @classmethod
    def product(cls, *factors: "JointDistribution") -> "JointDistribution":
        """Independent product; coordinates of the first factor come first."""
        sizes = ()
        mass = np.ones(1)
        for f in factors:
            sizes += f.shape.alphabet_sizes
            mass = np.outer(mass, f.mass).reshape(-1)
        return cls(UniverseShape(sizes), mass)

    def table(self) -> np.ndarray:
        """Mass as an array with one axis per record slot."""
        return self.mass.reshape(self.shape.alphabet_sizes)

    def prob(self, coords) -> float:
        return float(self.mass[flatten(self.shape, coords)])

    def __repr__(self):
        return f"JointDistribution(shape={self.shape.alphabet_sizes}, mass={self.mass.tolist()})"


@dataclass(frozen=True, eq=False)
class MarginalDistribution:
    """Distribution over a single unstructured alphabet (e.g. channel outputs)."""

    mass: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mass", validate_mass(self.mass))

    @property
    def support_size(self) -> int:
        return self.mass.size

    def __repr__(self):
        return f"MarginalDistribution(mass={self.mass.tolist()})"


DistributionLike = Union[JointDistribution, MarginalDistribution, np.ndarray, Sequence[float]]


def _mass_of(d: DistributionLike) -> np.ndarray:
    if isinstance(d, (JointDistribution, MarginalDistribution)):
        return d.mass
    return np.asarray(d, dtype=float).reshape(-1)


def xlogx(p: np.ndarray) -> np.ndarray:
    """Elementwise ``p log2 p`` with ``0 log 0 = 0``."""
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log2(p[pos])
    return out


def entropy(d: DistributionLike) -> float:
    """Shannon entropy in bits."""
    h = -float(xlogx(_mass_of(d)).sum())
    return max(h, 0.0)


def marginal(j: JointDistribution, index_set: Iterable[int]) -> JointDistribution:
    """Marginal of ``j`` on the coordinates ``index_set``."""
    idx = normalize_index_set(j.shape, index_set)
    others = tuple(i for i in range(j.shape.n) if i not in idx)
    table = j.table().sum(axis=others) if others else j.table()
    return JointDistribution(j.shape.sub(idx), table.reshape(-1))


def conditional(j: JointDistribution, index_set: Iterable[int], assignment: Sequence[int]) -> JointDistribution:
    """Law of the complementary coordinates given ``X_I = assignment``."""
    idx = normalize_index_set(j.shape, index_set)
    others = tuple(i for i in range(j.shape.n) if i not in idx)
    if not others:
        raise DimensionError("conditioning on every coordinate leaves nothing to describe")
    assignment = tuple(int(a) for a in assignment)
    if len(assignment) != len(idx):
        raise DimensionError(f"assignment {assignment} does not match index set {idx}")
    selector = [slice(None)] * j.shape.n
    for i, a in zip(idx, assignment):
        if not 0 <= a < j.shape.alphabet_sizes[i]:
            raise DimensionError(f"value {a} outside alphabet of record {i}")
        selector[i] = a
    slab = j.table()[tuple(selector)]
    total = slab.sum()
    if total <= 0:
        raise ConditioningError(f"assignment {assignment} on records {idx} has probability zero")
    return JointDistribution(j.shape.sub(others), (slab / total).reshape(-1))


def _check_joint(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=float)
    if np.any(arr < 0):
        raise DistributionError("joint table has negative entries")
    total = arr.sum()
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise DistributionError(f"joint table sums to {total!r}")
    return arr / total


def mutual_information(joint_ab) -> float:
    """``I(A;B)`` in bits from the matrix ``P(a, b)``."""
    p = _check_joint(joint_ab)
    if p.ndim != 2:
        raise DimensionError("mutual_information expects a 2-d joint table")
    pa = p.sum(axis=1, keepdims=True)
    pb = p.sum(axis=0, keepdims=True)
    pos = p > 0
    ratio = p[pos] / (pa * pb)[pos]
    return max(float(np.sum(p[pos] * np.log2(ratio))), 0.0)


def conditional_mutual_information(joint_abc) -> float:
    """``I(A;B|C)`` in bits from the 3-d table ``P(a, b, c)``."""
    p = _check_joint(joint_abc)
    if p.ndim != 3:
        raise DimensionError("conditional_mutual_information expects a 3-d joint table")
    pc = p.sum(axis=(0, 1), keepdims=True)
    pac = p.sum(axis=1, keepdims=True)
    pbc = p.sum(axis=0, keepdims=True)
    pos = p > 0
    ratio = (p * pc)[pos] / (pac * pbc)[pos]
    return max(float(np.sum(p[pos] * np.log2(ratio))), 0.0)
