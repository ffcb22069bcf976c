"""Hidden feature sampling around class locations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .locations import EnvelopeSpec, LocationPlan
from .rand import RandomStream

SAMPLING_DISTRIBUTIONS = ("normal", "uniform")


@dataclass(frozen=True)
class SamplerSpec:
    distribution: str = "normal"
    samples_per_class: int = 16
    scale_jitter: float = 0.1
    fake_scale: float = 2.0

    def __post_init__(self):
        problems = []
        if self.distribution not in SAMPLING_DISTRIBUTIONS:
            problems.append(f"sampling distribution must be one of {SAMPLING_DISTRIBUTIONS}")
        if self.samples_per_class < 1:
            problems.append("samples_per_class must be >= 1")
        if not 0 <= self.scale_jitter < 1:
            problems.append("scale_jitter must be in [0, 1)")
        if not self.fake_scale > 0:
            problems.append("fake_scale must be > 0")
        if problems:
            raise ConfigError(problems)


@dataclass
class HiddenMatrix:
    values: np.ndarray  # samples x hidden features
    labels: np.ndarray  # class index per row, 1-based


def usefulness_to_scale(u: float, envelope_scale: float, fake_scale: float) -> float:
    """Spread of a sampling distribution for a feature of usefulness ``u``.

    ``envelope_scale * (1 - u) / u``, capped at ``fake_scale``; ``u == 0``
    maps to ``fake_scale`` and ``u == 1`` to zero.
    """
    if not 0 <= u <= 1:
        raise ValueError(f"usefulness must be in [0, 1], got {u}")
    if u == 0:
        return float(fake_scale)
    return float(min(envelope_scale * (1.0 - u) / u, fake_scale))


def sample_hidden(
    stream: RandomStream,
    plan: LocationPlan,
    spec: SamplerSpec,
    envelope: EnvelopeSpec,
    jitter_stream: RandomStream | None = None,
) -> HiddenMatrix:
    """Draw ``samples_per_class`` values per class and hidden feature.

    Rows are grouped by class (class 1 first). True-feature scales are
    multiplied by a per-(class, feature) factor from
    ``U[1 - jitter, 1 + jitter]`` drawn from ``jitter_stream`` (defaults to a
    child of ``stream``).
    """
    n_classes, n_features = plan.locations.shape
    per_class = spec.samples_per_class
    if jitter_stream is None:
        jitter_stream = stream.fork("usefulness-jitter")

    base = np.array([
        usefulness_to_scale(u, envelope.scale, spec.fake_scale) if is_true else spec.fake_scale
        for u, is_true in zip(plan.usefulness, plan.true_mask)
    ])
    n_true = int(plan.true_mask.sum())
    jitter = np.ones((n_classes, n_features))
    if spec.scale_jitter > 0 and n_true:
        lo = 1.0 - spec.scale_jitter
        jitter[:, plan.true_mask] = lo + 2 * spec.scale_jitter * jitter_stream.random((n_classes, n_true))
    scales = base[None, :] * jitter

    values = np.empty((n_classes * per_class, n_features))
    for j in range(n_features):
        col_stream = stream.fork(f"column-{j}")
        if spec.distribution == "normal":
            draws = col_stream.standard_normal((n_classes, per_class))
        else:
            draws = col_stream.random((n_classes, per_class))
        loc = plan.locations[:, j, None]
        values[:, j] = (loc + scales[:, j, None] * draws).ravel()

    labels = np.repeat(np.arange(1, n_classes + 1), per_class)
    return HiddenMatrix(values, labels)


def normalize_columns(values):
    """Divide each column by its population standard deviation.

    Columns are not centered. Constant columns are returned unchanged.
    Accepts a plain array or a :class:`HiddenMatrix` and returns the same kind.
    """
    if isinstance(values, HiddenMatrix):
        return HiddenMatrix(normalize_columns(values.values), values.labels)
    values = np.asarray(values, dtype=float)
    std = values.std(axis=0)
    # rounding can leave a constant column with a tiny nonzero std
    std[(std == 0) | (np.ptp(values, axis=0) == 0)] = 1.0
    return values / std
