"""Per-class, per-hidden-feature distribution locations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .rand import RandomStream

ENVELOPE_KINDS = ("normal", "uniform")
USEFULNESS_SCHEMES = ("linear", "exponential", "longtailed")


@dataclass(frozen=True)
class EnvelopeSpec:
    """Distribution the class locations are drawn from.

    For ``uniform`` the location is the range start and ``scale`` its length.
    """

    kind: str = "normal"
    location: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ENVELOPE_KINDS:
            raise ConfigError(f"envelope kind must be one of {ENVELOPE_KINDS}, got {self.kind!r}")
        if not self.scale > 0:
            raise ConfigError(f"envelope scale must be > 0, got {self.scale}")

    def draw(self, stream: RandomStream, n: int) -> np.ndarray:
        if self.kind == "normal":
            return stream.draw_normal(self.location, self.scale, n)
        return stream.draw_uniform(self.location, self.scale, n)


@dataclass(frozen=True)
class UsefulnessScheme:
    kind: str = "linear"
    min_usefulness: float = 0.1
    max_usefulness: float = 0.9

    def __post_init__(self):
        problems = []
        if self.kind not in USEFULNESS_SCHEMES:
            problems.append(f"usefulness scheme must be one of {USEFULNESS_SCHEMES}, got {self.kind!r}")
        for name in ("min_usefulness", "max_usefulness"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                problems.append(f"{name} must be in (0, 1], got {value}")
        if self.min_usefulness > self.max_usefulness:
            problems.append("min_usefulness must not exceed max_usefulness")
        if problems:
            raise ConfigError(problems)


@dataclass
class LocationPlan:
    """Locations ``[class, feature]`` with usefulness and true/fake bookkeeping.

    True features occupy the first ``f_true`` columns, fake features the rest.
    """

    locations: np.ndarray
    usefulness: np.ndarray
    true_mask: np.ndarray
    ordering_extent: int
    sharing_extent: int

    @property
    def n_classes(self) -> int:
        return self.locations.shape[0]

    @property
    def n_features(self) -> int:
        return self.locations.shape[1]


def make_usefulness(scheme: UsefulnessScheme, f_true: int, f_fake: int) -> np.ndarray:
    """Usefulness of every hidden feature, true features first.

    True features decrease from ``max_usefulness`` to ``min_usefulness``
    following the scheme; fake features get exactly zero.
    """
    if f_true < 0 or f_fake < 0:
        raise ConfigError("feature counts must be nonnegative")
    hi, lo = scheme.max_usefulness, scheme.min_usefulness
    out = np.zeros(f_true + f_fake)
    if f_true == 0:
        return out
    if f_true == 1:
        out[0] = hi
        return out
    j = np.arange(f_true, dtype=float)
    t = j / (f_true - 1)
    if scheme.kind == "linear":
        true = hi - (hi - lo) * t
    elif scheme.kind == "exponential":
        true = hi * (lo / hi) ** t
    else:
        # hyperbolic decay 1/(1+j), mapped affinely onto [lo, hi]
        decay = 1.0 / (1.0 + j)
        tail = decay[-1]
        true = lo + (hi - lo) * (decay - tail) / (1.0 - tail)
    true[0], true[-1] = hi, lo
    out[:f_true] = true
    return out


def _run_lengths(stream: RandomStream, total: int, extent: int) -> list[int]:
    """Split ``total`` consecutive slots into runs with mean length ``extent``.

    Lengths are geometric, the last one truncated to fit. An extent covering
    all slots always yields a single run.
    """
    extent = max(extent, 1)
    if extent == 1:
        return [1] * total
    if extent >= total:
        return [total]
    lengths = []
    remaining = total
    while remaining > 0:
        length = min(stream.geometric(extent), remaining)
        lengths.append(length)
        remaining -= length
    return lengths


def _true_column(stream: RandomStream, envelope: EnvelopeSpec, n_classes: int,
                 ordering_extent: int, sharing_extent: int) -> np.ndarray:
    # sharing: random class groups, one envelope draw per group
    order = stream.permutation(n_classes)
    groups = _run_lengths(stream, n_classes, sharing_extent)
    group_locations = envelope.draw(stream, len(groups))
    column = np.empty(n_classes)
    column[order] = np.repeat(group_locations, groups)

    # ordering: sort within consecutive runs of class indices
    start = 0
    for length in _run_lengths(stream, n_classes, ordering_extent):
        column[start:start + length] = np.sort(column[start:start + length])
        start += length
    return column


def make_locations(
    stream: RandomStream,
    envelope: EnvelopeSpec,
    n_classes: int,
    f_true: int,
    f_fake: int,
    ordering_extent: int,
    sharing_extent: int,
    usefulness: np.ndarray | None = None,
) -> LocationPlan:
    """Draw the location matrix for all classes and hidden features.

    Each column gets its own child stream, so columns can be produced in any
    order. ``usefulness`` is attached to the plan as-is (zeros if omitted for
    the fake block, which is what the pipeline passes anyway).
    """
    problems = []
    if n_classes < 2:
        problems.append(f"number of classes must be >= 2, got {n_classes}")
    for name, value in (("ordering_extent", ordering_extent), ("sharing_extent", sharing_extent)):
        if not 0 <= value <= n_classes:
            problems.append(f"{name} must be in [0, {n_classes}], got {value}")
    if f_true < 0 or f_fake < 0:
        problems.append("feature counts must be nonnegative")
    if problems:
        raise ConfigError(problems)

    n_features = f_true + f_fake
    locations = np.empty((n_classes, n_features))
    for j in range(n_features):
        col_stream = stream.fork(f"column-{j}")
        if j < f_true:
            locations[:, j] = _true_column(col_stream, envelope, n_classes,
                                           ordering_extent, sharing_extent)
        else:
            locations[:, j] = envelope.draw(col_stream, 1)[0]

    true_mask = np.zeros(n_features, dtype=bool)
    true_mask[:f_true] = True
    if usefulness is None:
        usefulness = np.zeros(n_features)
    usefulness = np.asarray(usefulness, dtype=float)
    if usefulness.shape != (n_features,):
        raise ConfigError("usefulness vector does not match the feature count")
    return LocationPlan(locations, usefulness, true_mask,
                        int(ordering_extent), int(sharing_extent))
