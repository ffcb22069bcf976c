import numpy as np
import pytest
from scipy import stats

import bioblend
from bioblend.pipeline import blend_transitional
from bioblend.rand import RandomStream
from bioblend.sampler import normalize_columns


def test_bundle_shapes(small_config):
    b = bioblend.run_pipeline(small_config)
    assert b.features.shape == (20, 12)
    assert b.labels.tolist() == sorted(b.labels.tolist())
    assert np.bincount(b.labels).tolist() == [0, 5, 5, 5, 5]
    assert b.hidden.shape == (20, 5)
    assert b.usefulness.shape == (5,) and b.alpha.shape == (12,)
    assert b.true_mask.tolist() == [True, True, True, False, False]
    assert b.weights.n_trans == 20
    assert b.config["seed"] == 7


def test_same_seed_same_bundle(small_config):
    a = bioblend.run_pipeline(small_config)
    b = bioblend.run_pipeline(small_config)
    assert np.array_equal(a.features, b.features)
    assert np.array_equal(a.hidden, b.hidden)


def test_different_seed_differs(small_config):
    a = bioblend.run_pipeline(small_config)
    b = bioblend.run_pipeline(small_config.replace(seed=8))
    assert not np.array_equal(a.features, b.features)


def test_stage_streams_are_isolated(small_config):
    # changing only the noise settings must leave the hidden matrix and weights alone
    a = bioblend.run_pipeline(small_config)
    b = bioblend.run_pipeline(small_config.replace(noise_alpha_min=0.5, blend_k_max=6))
    assert np.array_equal(a.hidden, b.hidden)
    c = bioblend.run_pipeline(small_config.replace(noise=False))
    assert np.array_equal(a.weights.indices, c.weights.indices)


def test_minimal_config_degenerates_to_normalized_hidden():
    cfg = bioblend.validate_config(dict(
        n_labels=2, n_samples_per_label=2, n_true_features=1, n_fake_features=0,
        n_features_out=1, polynomial_degree=1, noise=False, blend_k_min=1, blend_k_max=1,
        blending_mode="linear", average_consecutive_locations=0, average_shared_locations=0,
        store_hidden=True, seed=3,
    ))
    b = bioblend.run_pipeline(cfg)
    assert np.array_equal(b.features, b.hidden)
    assert b.hidden.std() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("mode, positivity", [("linear", "exp"), ("logarithmic", "exp"),
                                              ("logarithmic", "shift")])
def test_streamed_equals_materialized(mode, positivity, rng):
    hidden = normalize_columns(rng.normal(size=(77, 9)))
    w = bioblend.make_weights(RandomStream(1), 60, 54, 2, 4)
    a, sa = blend_transitional(hidden, 2, w, mode, positivity=positivity, materialize=True)
    b, sb = blend_transitional(hidden, 2, w, mode, positivity=positivity, materialize=False,
                               block_rows=10)
    assert sa == sb
    assert np.array_equal(a, b)


def test_pipeline_streamed_equals_materialized(small_config):
    a = bioblend.run_pipeline(small_config, materialize=True)
    b = bioblend.run_pipeline(small_config, materialize=False)
    assert np.array_equal(a.features, b.features)


def test_threads_do_not_change_output(small_config):
    a = bioblend.run_pipeline(small_config)
    b = bioblend.run_pipeline(small_config.replace(threads=3))
    assert np.array_equal(a.features, b.features)


def test_shift_positivity_records_shift(small_config):
    b = bioblend.run_pipeline(small_config.replace(log_positivity="shift"))
    assert b.positivity_shift > 0
    assert bioblend.run_pipeline(small_config).positivity_shift == 0.0


def test_uniform_sampling_runs(small_config):
    b = bioblend.run_pipeline(small_config.replace(sampling_distribution="uniform", envelope="uniform"))
    assert np.all(np.isfinite(b.features))


def test_logarithmic_mode_is_long_tailed(desk_config):
    log_b = bioblend.run_pipeline(desk_config)
    lin_b = bioblend.run_pipeline(desk_config.replace(blending_mode="linear"))
    log_skew = np.median(stats.skew(log_b.features, axis=0))
    lin_skew = np.median(stats.skew(lin_b.features, axis=0))
    assert log_skew > lin_skew
    assert log_skew > 0.2
