"""Generator configuration: defaults, coercion and validation."""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field, fields
from typing import Any, Mapping

from .blender import BLEND_MODES, POSITIVITY
from .errors import ConfigError
from .locations import ENVELOPE_KINDS, USEFULNESS_SCHEMES, EnvelopeSpec, UsefulnessScheme
from .noise import NoiseSpec
from .polynomial import count_transitional
from .sampler import SAMPLING_DISTRIBUTIONS, SamplerSpec

SEED_ENV = "BIOBLEND_SEED"


@dataclass(frozen=True)
class GeneratorConfig:
    """Every parameter of one generation run.

    Defaults reproduce the 100-class, 10000-feature illustrative dataset.
    Fields below ``blending_mode`` are extensions with invented defaults.
    """

    n_labels: int = 100
    n_samples_per_label: int = 16
    n_true_features: int = 40
    n_fake_features: int = 160
    average_consecutive_locations: int = 2
    average_shared_locations: int = 3
    n_features_out: int = 10000
    blending_mode: str = "logarithmic"
    usefulness_scheme: str = "linear"
    usefulness_min: float = 0.1
    usefulness_max: float = 0.9
    sampling_distribution: str = "normal"
    envelope: str = "normal"
    envelope_location: float = 0.0
    envelope_scale: float = 1.0
    scale_jitter: float = 0.1
    fake_scale: float | None = None
    polynomial_degree: int = 2
    log_positivity: str = "exp"
    blend_k_min: int = 2
    blend_k_max: int = 4
    dirichlet_concentration: float = 1.0
    noise: bool = True
    noise_mode: str | None = None
    noise_alpha_min: float = 0.0
    noise_alpha_max: float = 1.0
    seed: int = 0
    output: str | None = None
    store_hidden: bool = False
    threads: int = 1

    # -- derived --------------------------------------------------------------

    @property
    def n_hidden(self) -> int:
        return self.n_true_features + self.n_fake_features

    @property
    def n_samples(self) -> int:
        return self.n_labels * self.n_samples_per_label

    @property
    def n_transitional(self) -> int:
        return count_transitional(self.n_hidden, self.polynomial_degree)

    @property
    def resolved_fake_scale(self) -> float:
        return 2.0 * self.envelope_scale if self.fake_scale is None else self.fake_scale

    @property
    def resolved_noise_mode(self) -> str:
        return self.blending_mode if self.noise_mode is None else self.noise_mode

    def envelope_spec(self) -> EnvelopeSpec:
        return EnvelopeSpec(self.envelope, self.envelope_location, self.envelope_scale)

    def usefulness_spec(self) -> UsefulnessScheme:
        return UsefulnessScheme(self.usefulness_scheme, self.usefulness_min, self.usefulness_max)

    def sampler_spec(self) -> SamplerSpec:
        return SamplerSpec(self.sampling_distribution, self.n_samples_per_label,
                           self.scale_jitter, self.resolved_fake_scale)

    def noise_spec(self) -> NoiseSpec:
        return NoiseSpec(self.noise, self.resolved_noise_mode,
                         self.noise_alpha_min, self.noise_alpha_max)

    def derived(self) -> dict[str, Any]:
        n_hidden = self.n_hidden
        out = {"n_hidden": n_hidden, "n_samples": self.n_samples}
        if n_hidden >= 1 and self.polynomial_degree >= 1:
            n_trans = self.n_transitional
            out["n_transitional"] = n_trans
            out["transitional_bytes"] = 8 * self.n_samples * n_trans
        out["output_bytes_estimate"] = 8 * self.n_samples * (
            self.n_features_out + (n_hidden if self.store_hidden else 0)
        ) + 8 * self.n_features_out * (self.blend_k_max + 2)
        return out

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    def replace(self, **changes) -> GeneratorConfig:
        return validate_config({**self.to_dict(), **changes})


FIELD_TYPES = {f.name: f.type for f in fields(GeneratorConfig)}
DEFAULTS = GeneratorConfig()


def _coerce(name: str, value: Any) -> Any:
    kind = FIELD_TYPES[name]
    if value is None:
        if "None" in kind:
            return None
        raise ValueError("may not be empty")
    if isinstance(value, str) and "None" in kind and value.strip().lower() in ("", "none", "auto"):
        return None
    if kind.startswith("int"):
        if isinstance(value, bool):
            raise ValueError("expected an integer")
        if isinstance(value, float):
            if not value.is_integer():
                raise ValueError("expected an integer")
            return int(value)
        return int(value)
    if kind.startswith("float"):
        return float(value)
    if kind.startswith("bool"):
        if isinstance(value, str):
            lowered = value.strip().lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError("expected a boolean")
        return bool(value)
    return str(value)


def _flag(name: str) -> str:
    return name.replace("_", "-")


def validate_config(raw: Mapping[str, Any] | None = None, env: Mapping[str, str] | None = None) -> GeneratorConfig:
    """Build a fully-defaulted config, or raise ConfigError listing every problem.

    Keys may use either ``snake_case`` or the ``dash-case`` flag spelling.
    When no seed is given, ``BIOBLEND_SEED`` from ``env`` (default
    ``os.environ``) is used.
    """
    raw = dict(raw or {})
    env = os.environ if env is None else env
    problems: list[str] = []
    values: dict[str, Any] = {}
    for key, value in raw.items():
        name = key.replace("-", "_")
        if name not in FIELD_TYPES:
            problems.append(f"unknown option {_flag(key)!r}")
            continue
        try:
            values[name] = _coerce(name, value)
        except (TypeError, ValueError) as exc:
            problems.append(f"{_flag(name)}: invalid value {value!r} ({exc})")
    if values.get("seed") is None and env.get(SEED_ENV):
        try:
            values["seed"] = int(env[SEED_ENV])
        except ValueError:
            problems.append(f"{SEED_ENV}: invalid seed {env[SEED_ENV]!r}")
    if problems:
        raise ConfigError(problems)

    cfg = dataclasses.replace(DEFAULTS, **values)
    problems.extend(_check(cfg))
    if problems:
        raise ConfigError(problems)
    return cfg


def _check(cfg: GeneratorConfig) -> list[str]:
    p = []
    C = cfg.n_labels
    if C < 2:
        p.append("n-labels must be >= 2")
    if cfg.n_samples_per_label < 1:
        p.append("n-samples-per-label must be >= 1")
    if cfg.n_true_features < 0:
        p.append("n-true-features must be >= 0")
    if cfg.n_fake_features < 0:
        p.append("n-fake-features must be >= 0")
    if cfg.n_true_features + cfg.n_fake_features < 1:
        p.append("need at least one hidden feature (n-true-features + n-fake-features >= 1)")
    for name in ("average_consecutive_locations", "average_shared_locations"):
        value = getattr(cfg, name)
        if not 0 <= value <= max(C, 0):
            p.append(f"{_flag(name)} must be in [0, n-labels={C}], got {value}")
    if cfg.n_features_out < 1:
        p.append("n-features-out must be >= 1")
    if cfg.blending_mode not in BLEND_MODES:
        p.append(f"blending-mode must be one of {BLEND_MODES}")
    if cfg.log_positivity not in POSITIVITY:
        p.append(f"log-positivity must be one of {POSITIVITY}")
    if cfg.noise_mode is not None and cfg.noise_mode not in BLEND_MODES:
        p.append(f"noise-mode must be one of {BLEND_MODES}")
    if cfg.usefulness_scheme not in USEFULNESS_SCHEMES:
        p.append(f"usefulness-scheme must be one of {USEFULNESS_SCHEMES}")
    for name in ("usefulness_min", "usefulness_max"):
        if not 0 < getattr(cfg, name) <= 1:
            p.append(f"{_flag(name)} must be in (0, 1]")
    if cfg.usefulness_min > cfg.usefulness_max:
        p.append("usefulness-min must not exceed usefulness-max")
    if cfg.sampling_distribution not in SAMPLING_DISTRIBUTIONS:
        p.append(f"sampling-distribution must be one of {SAMPLING_DISTRIBUTIONS}")
    if cfg.envelope not in ENVELOPE_KINDS:
        p.append(f"envelope must be one of {ENVELOPE_KINDS}")
    if not cfg.envelope_scale > 0:
        p.append("envelope-scale must be > 0")
    if not 0 <= cfg.scale_jitter < 1:
        p.append("scale-jitter must be in [0, 1)")
    if cfg.fake_scale is not None and not cfg.fake_scale > 0:
        p.append("fake-scale must be > 0")
    if cfg.polynomial_degree < 1:
        p.append("polynomial-degree must be >= 1")
    if cfg.blend_k_min < 1:
        p.append("blend-k-min must be >= 1")
    if cfg.blend_k_min > cfg.blend_k_max:
        p.append("blend-k-min must not exceed blend-k-max")
    if cfg.polynomial_degree >= 1 and cfg.n_hidden >= 1 and cfg.blend_k_max > cfg.n_transitional:
        p.append(f"blend-k-max={cfg.blend_k_max} exceeds the number of transitional "
                 f"features ({cfg.n_transitional})")
    if not cfg.dirichlet_concentration > 0:
        p.append("dirichlet-concentration must be > 0")
    for name in ("noise_alpha_min", "noise_alpha_max"):
        if not 0 <= getattr(cfg, name) <= 1:
            p.append(f"{_flag(name)} must be in [0, 1]")
    if cfg.noise_alpha_min > cfg.noise_alpha_max:
        p.append("noise-alpha-min must not exceed noise-alpha-max")
    if not 0 <= cfg.seed < 2**64:
        p.append("seed must be a 64-bit unsigned integer")
    if cfg.threads < 1:
        p.append("threads must be >= 1")
    return p
