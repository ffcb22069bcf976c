"""Per-feature interpolation between visible features and matched noise."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .rand import RandomStream

NOISE_MODES = ("linear", "logarithmic")


@dataclass(frozen=True)
class NoiseSpec:
    enabled: bool = True
    mode: str = "linear"
    alpha_min: float = 0.0
    alpha_max: float = 1.0

    def __post_init__(self):
        problems = []
        if self.mode not in NOISE_MODES:
            problems.append(f"noise mode must be one of {NOISE_MODES}, got {self.mode!r}")
        for name in ("alpha_min", "alpha_max"):
            if not 0 <= getattr(self, name) <= 1:
                problems.append(f"noise {name} must be in [0, 1], got {getattr(self, name)}")
        if self.alpha_min > self.alpha_max:
            problems.append("noise alpha_min must not exceed alpha_max")
        if problems:
            raise ConfigError(problems)


def add_noise(stream: RandomStream, values: np.ndarray, spec: NoiseSpec):
    """Blend every column with Gaussian noise of the same mean and std.

    Returns ``(noisy, alpha)``. ``alpha[j] ~ U[alpha_min, alpha_max]`` is the
    weight kept on the signal; columns with ``alpha == 1`` are passed through
    untouched. In logarithmic mode signal and noise are shifted to be >= 1
    (one shift per column, shared by both), interpolated geometrically, and
    shifted back.
    """
    values = np.asarray(values, dtype=float)
    n_rows, n_cols = values.shape
    if not spec.enabled:
        return values.copy(), np.ones(n_cols)

    alpha = stream.draw_uniform(spec.alpha_min, spec.alpha_max - spec.alpha_min, n_cols)
    out = values.copy()
    mean = values.mean(axis=0)
    std = values.std(axis=0)
    # columns drawn feature by feature, so column j depends only on its position
    noise = (mean + std * stream.standard_normal((n_cols, n_rows)).T)
    noisy = alpha < 1
    a = alpha[noisy]
    v = values[:, noisy]
    n = noise[:, noisy]
    if spec.mode == "linear":
        out[:, noisy] = a * v + (1.0 - a) * n
    else:
        shift = 1.0 - np.minimum(v.min(axis=0), n.min(axis=0))
        out[:, noisy] = np.exp(a * np.log(v + shift) + (1.0 - a) * np.log(n + shift)) - shift
    return out, alpha
