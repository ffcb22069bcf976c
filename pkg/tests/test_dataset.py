import hashlib

import h5py
import numpy as np
import pytest

import bioblend
from bioblend.dataset import FORMAT_VERSION, export_csv, read_csv_matrix, read_hdf5, write_hdf5
from bioblend.errors import FormatError


@pytest.fixture
def bundle(small_config):
    return bioblend.run_pipeline(small_config)


def _digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_layout(bundle, tmp_path):
    path = write_hdf5(bundle, tmp_path / "d.h5")
    with h5py.File(path, "r") as f:
        assert f["features"].shape == (20, 12) and f["features"].dtype == "<f8"
        assert f["labels"].dtype == "<i8"
        for name in ("hidden/features", "hidden/usefulness", "hidden/true_mask", "hidden/locations",
                     "noise/alpha", "weights/indices", "weights/values", "weights/row_offsets"):
            assert name in f
        assert f.attrs["version"] == FORMAT_VERSION
        assert f.attrs["seed"] == 7
        assert f.attrs["n_labels"] == 4
        assert f.attrs["blending_mode"] == "logarithmic"
        assert f.attrs["fake_scale"] == ""
        assert "positivity_shift" in f.attrs


def test_csr_triplet_invariants(bundle, tmp_path):
    with h5py.File(write_hdf5(bundle, tmp_path / "d.h5"), "r") as f:
        offsets = f["weights/row_offsets"][()]
        values = f["weights/values"][()]
    assert offsets[0] == 0 and np.all(np.diff(offsets) >= 0) and offsets[-1] == len(values)
    sums = np.add.reduceat(values, offsets[:-1])
    assert np.all(np.abs(sums - 1) <= 1e-12)


def test_round_trip_is_exact(bundle, tmp_path):
    back = read_hdf5(write_hdf5(bundle, tmp_path / "d.h5"))
    for name in ("features", "labels", "hidden", "usefulness", "true_mask", "alpha", "locations"):
        assert np.array_equal(getattr(back, name), getattr(bundle, name)), name
    for name in ("row_offsets", "indices", "values"):
        assert np.array_equal(getattr(back.weights, name), getattr(bundle.weights, name))
    assert back.config == bundle.config
    assert back.positivity_shift == bundle.positivity_shift


def test_hidden_matrix_optional(small_config, tmp_path):
    b = bioblend.run_pipeline(small_config.replace(store_hidden=False))
    path = write_hdf5(b, tmp_path / "d.h5")
    with h5py.File(path, "r") as f:
        assert "hidden/features" not in f
        assert "hidden/usefulness" in f
    assert read_hdf5(path).hidden is None


def test_identical_bundles_give_identical_bytes(small_config, tmp_path):
    a = write_hdf5(bioblend.run_pipeline(small_config), tmp_path / "a.h5")
    b = write_hdf5(bioblend.run_pipeline(small_config), tmp_path / "b.h5")
    assert a.read_bytes() == b.read_bytes()


def test_missing_member_is_a_format_error(bundle, tmp_path):
    path = write_hdf5(bundle, tmp_path / "d.h5")
    with h5py.File(path, "a") as f:
        del f["labels"]
    with pytest.raises(FormatError, match="missing /labels"):
        read_hdf5(path)


def test_future_major_version_is_refused(bundle, tmp_path):
    path = write_hdf5(bundle, tmp_path / "d.h5")
    with h5py.File(path, "a") as f:
        f.attrs["version"] = "2.0"
    with pytest.raises(FormatError, match="unsupported format version 2.0"):
        read_hdf5(path)


def test_unwritable_path_leaves_no_file(bundle, tmp_path):
    target = tmp_path / "missing-dir" / "d.h5"
    with pytest.raises(OSError, match="missing-dir"):
        write_hdf5(bundle, target)
    assert not target.exists()


def test_csv_export(bundle, tmp_path):
    paths = export_csv(bundle, tmp_path / "csv")
    assert [p.name for p in paths] == ["features.csv", "labels.csv", "hidden.csv"]
    lines = (tmp_path / "csv" / "features.csv").read_text().split("\n")
    assert lines[0] == ",".join(f"f{j}" for j in range(12))
    assert len(lines) == 22 and lines[-1] == ""
    assert np.array_equal(read_csv_matrix(tmp_path / "csv" / "features.csv"), bundle.features)
    assert np.array_equal(read_csv_matrix(tmp_path / "csv" / "hidden.csv"), bundle.hidden)
    labels = np.loadtxt(tmp_path / "csv" / "labels.csv", skiprows=1, dtype=int)
    assert np.array_equal(labels, bundle.labels)


def test_csv_two_by_two(tmp_path):
    w = bioblend.BlendWeights(np.array([0, 1, 2]), np.array([0, 1]), np.array([1.0, 1.0]), 2)
    b = bioblend.DatasetBundle(
        features=np.array([[0.1, 1 / 3], [2.0, -5e-300]]), labels=np.array([1, 2]),
        usefulness=np.array([1.0]), true_mask=np.array([True]), alpha=np.ones(2), weights=w,
    )
    export_csv(b, tmp_path)
    text = (tmp_path / "features.csv").read_text()
    assert text.count("\n") == 3
    assert not (tmp_path / "hidden.csv").exists()
    assert np.array_equal(read_csv_matrix(tmp_path / "features.csv"), b.features)


def test_inconsistent_bundle_is_rejected():
    w = bioblend.BlendWeights(np.array([0, 1]), np.array([0]), np.array([1.0]), 1)
    with pytest.raises(bioblend.BioblendError):
        bioblend.DatasetBundle(features=np.zeros((3, 1)), labels=np.array([1, 2]),
                               usefulness=np.ones(1), true_mask=np.ones(1, bool),
                               alpha=np.ones(1), weights=w)
