"""Runs the generation stages in order and assembles the dataset."""
from __future__ import annotations

import logging

import numpy as np

from .blender import blend, make_weights
from .config import GeneratorConfig
from .dataset import DatasetBundle
from .errors import InvariantError
from .locations import make_locations, make_usefulness
from .noise import add_noise
from .polynomial import expand_columns
from .rand import RandomStream
from .sampler import normalize_columns, sample_hidden

log = logging.getLogger(__name__)

# transitional matrices above this size are streamed in row blocks
MATERIALIZE_LIMIT_BYTES = 1 << 30


def _transitional_min(hidden: np.ndarray, d: int, block_rows: int) -> float:
    lo = np.inf
    for start in range(0, hidden.shape[0], block_rows):
        lo = min(lo, float(expand_columns(hidden[start:start + block_rows], d).min()))
    return lo


def blend_transitional(hidden: np.ndarray, d: int, weights, mode: str, *, positivity: str = "exp",
                       threads: int = 1, materialize: bool | None = None, block_rows: int = 256):
    """Expand ``hidden`` and blend it, materialized or streamed by row blocks.

    Both routes give bit-identical output. Returns ``(visible, shift)``.
    """
    n_trans = weights.n_trans
    uses_shift = mode == "logarithmic" and positivity == "shift"
    if materialize is None:
        materialize = 8 * hidden.shape[0] * n_trans <= MATERIALIZE_LIMIT_BYTES
    if materialize:
        trans = expand_columns(hidden, d)
        shift = 1.0 - float(trans.min()) if uses_shift else 0.0
        return blend(trans, weights, mode, shift=shift, positivity=positivity,
                     block_rows=block_rows, threads=threads), shift

    shift = 1.0 - _transitional_min(hidden, d, block_rows) if uses_shift else 0.0
    out = np.empty((hidden.shape[0], weights.n_visible))
    for start in range(0, hidden.shape[0], block_rows):
        block = expand_columns(hidden[start:start + block_rows], d)
        out[start:start + block_rows] = blend(block, weights, mode, shift=shift,
                                              positivity=positivity, block_rows=block_rows,
                                              threads=threads)
    return out, shift


def run_pipeline(config: GeneratorConfig, materialize: bool | None = None) -> DatasetBundle:
    """Generate one dataset from a validated config.

    Stage order: usefulness, locations, hidden sampling, normalization,
    polynomial expansion, weights, blending, noise. Each random stage owns a
    child stream of the root seed.
    """
    root = RandomStream(config.seed)
    streams = {label: root.fork(label)
               for label in ("usefulness-jitter", "locations", "sampler", "weights", "noise")}
    envelope = config.envelope_spec()

    log.info("drawing locations for %d classes x %d hidden features",
             config.n_labels, config.n_hidden)
    usefulness = make_usefulness(config.usefulness_spec(), config.n_true_features,
                                 config.n_fake_features)
    plan = make_locations(streams["locations"], envelope, config.n_labels,
                          config.n_true_features, config.n_fake_features,
                          config.average_consecutive_locations,
                          config.average_shared_locations, usefulness=usefulness)

    log.info("sampling %d x %d hidden matrix", config.n_samples, config.n_hidden)
    hidden = sample_hidden(streams["sampler"], plan, config.sampler_spec(), envelope,
                           jitter_stream=streams["usefulness-jitter"])
    hidden_values = normalize_columns(hidden.values)

    log.info("blending %d transitional into %d visible features",
             config.n_transitional, config.n_features_out)
    weights = make_weights(streams["weights"], config.n_features_out, config.n_transitional,
                           config.blend_k_min, config.blend_k_max,
                           config.dirichlet_concentration)
    visible, shift = blend_transitional(hidden_values, config.polynomial_degree, weights,
                                        config.blending_mode, positivity=config.log_positivity,
                                        threads=config.threads,
                                        materialize=materialize)

    log.info("adding noise (%s)", "on" if config.noise else "off")
    visible, alpha = add_noise(streams["noise"], visible, config.noise_spec())
    if not np.all(np.isfinite(visible)):
        raise InvariantError("non-finite values in the visible matrix")

    return DatasetBundle(
        features=visible,
        labels=hidden.labels,
        usefulness=plan.usefulness,
        true_mask=plan.true_mask,
        alpha=alpha,
        weights=weights,
        config=config.to_dict(),
        positivity_shift=shift,
        hidden=hidden_values if config.store_hidden else None,
        locations=plan.locations,
    )
