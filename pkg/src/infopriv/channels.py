"""Privacy channels: row-stochastic matrices from datasets to query outputs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConditioningError, DimensionError, DistributionError
from .probability import (
    NORMALIZATION_TOL,
    JointDistribution,
    MarginalDistribution,
    UniverseShape,
    normalize_index_set,
    unflatten,
)


@dataclass(frozen=True, eq=False)
class PrivacyChannel:
    """``rows[flat(x), y] = p(y|x)``.

    ``source_rows`` is set only by :func:`induced_channel` when zero-mass
    inputs were dropped: entry ``r`` is the flat index (in the original
    sub-universe) that row ``r`` stands for.
    """

    input_shape: UniverseShape
    rows: np.ndarray
    source_rows: Optional[tuple] = None

    def __post_init__(self):
        shape = self.input_shape
        if not isinstance(shape, UniverseShape):
            shape = UniverseShape(tuple(shape))
            object.__setattr__(self, "input_shape", shape)
        rows = np.array(self.rows, dtype=float)
        if rows.ndim != 2:
            raise DimensionError("channel rows must form a matrix")
        if rows.shape[0] != shape.total_size:
            raise DimensionError(f"{rows.shape[0]} rows for a universe of size {shape.total_size}")
        if rows.shape[1] < 1:
            raise DimensionError("channel needs at least one output symbol")
        if not np.all(np.isfinite(rows)) or np.any(rows < 0):
            raise DistributionError("channel rows must be finite and non-negative")
        sums = rows.sum(axis=1)
        bad = np.abs(sums - 1.0) > NORMALIZATION_TOL
        if np.any(bad):
            r = int(np.argmax(bad))
            raise DistributionError(f"row {r} sums to {sums[r]!r}")
        rows = rows / sums[:, None]
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        if self.source_rows is not None:
            object.__setattr__(self, "source_rows", tuple(int(s) for s in self.source_rows))

    @property
    def output_size(self) -> int:
        return self.rows.shape[1]

    @property
    def n(self) -> int:
        return self.input_shape.n

    def tensor(self) -> np.ndarray:
        """Rows reshaped to ``(*alphabet_sizes, output_size)``."""
        return self.rows.reshape(self.input_shape.alphabet_sizes + (self.output_size,))

    def __repr__(self):
        return (f"PrivacyChannel(alphabets={self.input_shape.alphabet_sizes}, "
                f"outputs={self.output_size})")


@dataclass(frozen=True)
class MatrixUniverse:
    """``m`` datasets about the same ``n`` individuals.

    The flattened universe concatenates the record slots of dataset 0, then
    dataset 1, and so on, so dataset 0 varies slowest.
    """

    shapes: tuple

    def __post_init__(self):
        shapes = tuple(s if isinstance(s, UniverseShape) else UniverseShape(tuple(s)) for s in self.shapes)
        if len(shapes) < 1:
            raise DimensionError("need at least one dataset")
        if len({s.n for s in shapes}) != 1:
            raise DimensionError("every dataset must hold one record per individual")
        object.__setattr__(self, "shapes", shapes)

    @property
    def n(self) -> int:
        return self.shapes[0].n

    @property
    def m(self) -> int:
        return len(self.shapes)

    @property
    def shape(self) -> UniverseShape:
        sizes = ()
        for s in self.shapes:
            sizes += s.alphabet_sizes
        return UniverseShape(sizes)

    def dataset_slots(self, j: int) -> tuple:
        """Flattened-slot indices of dataset ``j``."""
        if not 0 <= j < self.m:
            raise DimensionError(f"dataset {j} out of range")
        return tuple(range(j * self.n, (j + 1) * self.n))

    def individual_slots(self, i: int) -> tuple:
        """Slots of individual ``i`` across all datasets (the column ``X_i``)."""
        if not 0 <= i < self.n:
            raise DimensionError(f"individual {i} out of range")
        return tuple(j * self.n + i for j in range(self.m))


def _check_input(ch: PrivacyChannel, x: JointDistribution):
    if x.shape != ch.input_shape:
        raise DimensionError(
            f"distribution shape {x.shape.alphabet_sizes} does not match channel input "
            f"{ch.input_shape.alphabet_sizes}")


def output_distribution(ch: PrivacyChannel, x: JointDistribution) -> MarginalDistribution:
    """``p(y) = sum_x p(x) p(y|x)``."""
    _check_input(ch, x)
    return MarginalDistribution(x.mass @ ch.rows)


def joint_io(ch: PrivacyChannel, x: JointDistribution, index_set: Iterable[int]) -> np.ndarray:
    """Matrix ``P(x_I, y)`` with ``x_I`` flattened row-major over the sorted index set."""
    _check_input(ch, x)
    idx = normalize_index_set(ch.input_shape, index_set)
    sizes = ch.input_shape.alphabet_sizes
    full = x.table()[..., None] * ch.tensor()
    others = tuple(i for i in range(len(sizes)) if i not in idx)
    reduced = full.sum(axis=others) if others else full
    rows = int(np.prod([sizes[i] for i in idx]))
    return reduced.reshape(rows, ch.output_size)


def induced_channel(ch: PrivacyChannel, x: JointDistribution, index_set: Iterable[int]) -> PrivacyChannel:
    """Channel from ``X_I`` to ``Y`` obtained by mixing over ``p(x_(I) | x_I)``.

    Inputs ``x_I`` with zero marginal mass have no conditional law and are
    dropped.  When that happens the result has a single input slot and its
    ``source_rows`` lists the surviving flat indices of ``X_I``.
    """
    idx = normalize_index_set(ch.input_shape, index_set)
    pio = joint_io(ch, x, idx)
    px = pio.sum(axis=1)
    keep = np.flatnonzero(px > 0)
    if keep.size == 0:
        raise ConditioningError("input distribution has no mass")
    rows = pio[keep] / px[keep, None]
    sub = ch.input_shape.sub(idx)
    if keep.size == sub.total_size:
        return PrivacyChannel(sub, rows)
    return PrivacyChannel(UniverseShape((int(keep.size),)), rows, source_rows=tuple(keep.tolist()))


def induced_input(x: JointDistribution, induced: PrivacyChannel, index_set: Iterable[int]) -> JointDistribution:
    """Marginal of ``x`` on ``I`` laid out to match the rows of ``induced``."""
    from .probability import marginal

    m = marginal(x, index_set)
    if induced.source_rows is None:
        return m
    return JointDistribution(induced.input_shape, m.mass[list(induced.source_rows)])


def lift_channel(ch: PrivacyChannel, shape: UniverseShape, slots: Sequence[int]) -> PrivacyChannel:
    """View ``ch`` as a channel on the larger universe ``shape`` that reads only ``slots``."""
    slots = tuple(int(s) for s in slots)
    if tuple(shape.alphabet_sizes[s] for s in slots) != ch.input_shape.alphabet_sizes:
        raise DimensionError("slots do not match the channel's input alphabets")
    tensor = ch.tensor()
    # move the channel's record axes to their slot positions, broadcasting the rest
    expand = [1] * shape.n + [ch.output_size]
    order = np.argsort(slots)
    t = np.transpose(tensor, tuple(order) + (len(slots),))
    for s in slots:
        expand[s] = shape.alphabet_sizes[s]
    t = t.reshape(expand)
    t = np.broadcast_to(t, shape.alphabet_sizes + (ch.output_size,))
    return PrivacyChannel(shape, t.reshape(shape.total_size, ch.output_size))


def compose_same_input(*channels: PrivacyChannel) -> PrivacyChannel:
    """``p((y_1, ..., y_m)|x) = prod_j p(y_j|x)``; output index is row-major, ``y_1`` slowest."""
    if len(channels) < 2:
        raise DimensionError("composition needs at least two channels")
    shape = channels[0].input_shape
    rows = channels[0].rows
    for ch in channels[1:]:
        if ch.input_shape != shape:
            raise DimensionError("composed channels must share an input universe")
        rows = (rows[:, :, None] * ch.rows[:, None, :]).reshape(rows.shape[0], -1)
    return PrivacyChannel(shape, rows)


def compose_independent(*channels: PrivacyChannel) -> PrivacyChannel:
    """``p((y_1, ..., y_m)|(x^1, ..., x^m)) = prod_j p(y_j|x^j)`` on the product universe."""
    if len(channels) < 2:
        raise DimensionError("composition needs at least two channels")
    rows = channels[0].rows
    sizes = channels[0].input_shape.alphabet_sizes
    for ch in channels[1:]:
        rows = np.kron(rows, ch.rows)
        sizes += ch.input_shape.alphabet_sizes
    return PrivacyChannel(UniverseShape(sizes), rows)


# ---------------------------------------------------------------------------
# mechanism generators

def identity_channel(alphabets) -> PrivacyChannel:
    shape = UniverseShape(tuple(alphabets))
    return PrivacyChannel(shape, np.eye(shape.total_size))


def constant_channel(alphabets, outputs: int = 2, row=None) -> PrivacyChannel:
    shape = UniverseShape(tuple(alphabets))
    if row is None:
        if outputs < 1:
            raise ValueError("outputs must be positive")
        row = np.full(outputs, 1.0 / outputs)
    row = np.asarray(row, dtype=float)
    return PrivacyChannel(shape, np.tile(row, (shape.total_size, 1)))


def randomized_response(alphabets=(2,), q: float = 0.25) -> PrivacyChannel:
    """Each record is reported truthfully with probability ``1 - q``, otherwise
    replaced by one of the other values of its alphabet uniformly at random."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"flip probability must lie in [0, 1], got {q}")
    shape = UniverseShape(tuple(alphabets))
    rows = np.ones((1, 1))
    for k in shape.alphabet_sizes:
        if k == 1:
            block = np.ones((1, 1))
        else:
            block = np.full((k, k), q / (k - 1))
            np.fill_diagonal(block, 1.0 - q)
        rows = np.kron(rows, block)
    return PrivacyChannel(shape, rows)


def xor_channel(records: int = 2) -> PrivacyChannel:
    """Binary records, deterministic output ``y = x_1 xor ... xor x_n``."""
    if records < 1:
        raise ValueError("need at least one record")
    shape = UniverseShape((2,) * records)
    rows = np.zeros((shape.total_size, 2))
    for f in range(shape.total_size):
        rows[f, sum(unflatten(shape, f)) % 2] = 1.0
    return PrivacyChannel(shape, rows)


def truncated_geometric(records: int = 2, alpha: float = 0.5) -> PrivacyChannel:
    """Counting query over binary records released by the truncated geometric
    mechanism: interior outputs get ``(1-a)/(1+a) a^|y-c|``, the two end
    outputs absorb the tails, ``a^|y-c| / (1+a)``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"decay must lie in (0, 1), got {alpha}")
    if records < 1:
        raise ValueError("need at least one record")
    shape = UniverseShape((2,) * records)
    ys = np.arange(records + 1)
    rows = np.zeros((shape.total_size, records + 1))
    for f in range(shape.total_size):
        c = sum(unflatten(shape, f))
        row = (1 - alpha) / (1 + alpha) * alpha ** np.abs(ys - c)
        row[0] = alpha ** c / (1 + alpha)
        row[-1] = alpha ** (records - c) / (1 + alpha)
        rows[f] = row
    return PrivacyChannel(shape, rows)


def random_channel(alphabets, outputs: int, rng: np.random.Generator, concentration: float = 1.0) -> PrivacyChannel:
    """Rows drawn independently from a symmetric Dirichlet."""
    shape = UniverseShape(tuple(alphabets))
    rows = rng.dirichlet(np.full(outputs, concentration), size=shape.total_size)
    return PrivacyChannel(shape, rows)


GENERATORS = {
    "identity": identity_channel,
    "constant": constant_channel,
    "randomized_response": randomized_response,
    "rr": randomized_response,
    "xor": xor_channel,
    "truncated_geometric": truncated_geometric,
    "geometric": truncated_geometric,
}


def generate(kind: str, **params) -> PrivacyChannel:
    """Build a standard mechanism by name (see ``GENERATORS``)."""
    try:
        factory = GENERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown channel kind {kind!r}; choose from {sorted(GENERATORS)}") from None
    return factory(**params)


# ---------------------------------------------------------------------------
# JSON

def format_float(x: float) -> str:
    """17 significant digits: enough for exact round trips."""
    return format(float(x), ".17g")


def channel_to_dict(ch: PrivacyChannel) -> dict:
    return {
        "alphabets": list(ch.input_shape.alphabet_sizes),
        "outputs": ch.output_size,
        "rows": ch.rows.tolist(),
    }


def channel_from_dict(obj: dict) -> PrivacyChannel:
    try:
        alphabets = [int(a) for a in obj["alphabets"]]
        outputs = int(obj["outputs"])
        rows = np.array(obj["rows"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise DistributionError(f"malformed channel object: {exc}") from None
    if rows.ndim != 2 or rows.shape[1] != outputs:
        raise DimensionError(f"rows do not have {outputs} columns")
    return PrivacyChannel(UniverseShape(tuple(alphabets)), rows)


def dumps_channel(ch: PrivacyChannel) -> str:
    from .report import dumps

    return dumps(channel_to_dict(ch))


def loads_channel(text: str) -> PrivacyChannel:
    return channel_from_dict(json.loads(text))


def load_channel(path) -> PrivacyChannel:
    with open(path) as fh:
        return loads_channel(fh.read())


def save_channel(ch: PrivacyChannel, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_channel(ch))
