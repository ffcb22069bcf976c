"""Dataset bundle and its HDF5 / CSV serialization.

HDF5 layout (version 1)::

    /features              float64 [samples, visible]
    /labels                int64   [samples], 1-based class index
    /hidden/features       float64 [samples, hidden]   (only with store_hidden)
    /hidden/usefulness     float64 [hidden]
    /hidden/true_mask      uint8   [hidden]
    /hidden/locations      float64 [classes, hidden]
    /noise/alpha           float64 [visible]
    /weights/row_offsets   int64   [visible + 1]
    /weights/indices       int64   [nnz]
    /weights/values        float64 [nnz]

Root attributes carry ``version``, ``seed``, ``positivity_shift``, every
config field (``None`` stored as an empty string) and ``config_json``.
"""
from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import h5py
import numpy as np

from .blender import BlendWeights
from .errors import BioblendError, FormatError

FORMAT_VERSION = "1.0"

_REQUIRED = (
    "/features", "/labels", "/hidden/usefulness", "/hidden/true_mask", "/noise/alpha",
    "/weights/row_offsets", "/weights/indices", "/weights/values",
)


@dataclass
class DatasetBundle:
    features: np.ndarray
    labels: np.ndarray
    usefulness: np.ndarray
    true_mask: np.ndarray
    alpha: np.ndarray
    weights: BlendWeights
    config: dict[str, Any] = field(default_factory=dict)
    positivity_shift: float = 0.0
    hidden: np.ndarray | None = None
    locations: np.ndarray | None = None

    def __post_init__(self):
        n_samples, n_visible = self.features.shape
        problems = []
        if self.labels.shape != (n_samples,):
            problems.append("labels length does not match the sample count")
        if self.alpha.shape != (n_visible,):
            problems.append("alpha length does not match the visible feature count")
        if self.weights.n_visible != n_visible:
            problems.append("weight rows do not match the visible feature count")
        if self.usefulness.shape != self.true_mask.shape:
            problems.append("usefulness and true_mask differ in length")
        if self.hidden is not None and self.hidden.shape != (n_samples, len(self.usefulness)):
            problems.append("hidden matrix shape is inconsistent")
        if len(self.labels) and self.labels.min() < 1:
            problems.append("labels must be 1-based")
        if problems:
            raise BioblendError("; ".join(problems))

    @property
    def n_classes(self) -> int:
        return int(self.labels.max())

    @property
    def true_hidden(self) -> np.ndarray | None:
        if self.hidden is None:
            return None
        return self.hidden[:, self.true_mask]


def _attr(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return np.bool_(value)
    return value


def write_hdf5(bundle: DatasetBundle, path) -> Path:
    """Write ``bundle`` to ``path``; a partial file is removed on failure."""
    path = Path(path)
    try:
        with h5py.File(path, "w", libver="earliest") as f:
            f.create_dataset("features", data=np.ascontiguousarray(bundle.features, dtype="<f8"))
            f.create_dataset("labels", data=np.asarray(bundle.labels, dtype="<i8"))
            hidden = f.create_group("hidden")
            if bundle.hidden is not None:
                hidden.create_dataset("features", data=np.asarray(bundle.hidden, dtype="<f8"))
            hidden.create_dataset("usefulness", data=np.asarray(bundle.usefulness, dtype="<f8"))
            hidden.create_dataset("true_mask", data=np.asarray(bundle.true_mask, dtype="u1"))
            if bundle.locations is not None:
                hidden.create_dataset("locations", data=np.asarray(bundle.locations, dtype="<f8"))
            f.create_group("noise").create_dataset("alpha", data=np.asarray(bundle.alpha, dtype="<f8"))
            w = f.create_group("weights")
            w.create_dataset("row_offsets", data=np.asarray(bundle.weights.row_offsets, dtype="<i8"))
            w.create_dataset("indices", data=np.asarray(bundle.weights.indices, dtype="<i8"))
            w.create_dataset("values", data=np.asarray(bundle.weights.values, dtype="<f8"))
            w.attrs["n_trans"] = bundle.weights.n_trans
            w.attrs["k_min"] = bundle.weights.k_min
            w.attrs["k_max"] = bundle.weights.k_max

            f.attrs["version"] = FORMAT_VERSION
            f.attrs["seed"] = np.uint64(bundle.config.get("seed", 0))
            f.attrs["positivity_shift"] = float(bundle.positivity_shift)
            for key in sorted(bundle.config):
                if key in ("seed", "version", "positivity_shift"):
                    continue
                f.attrs[key] = _attr(bundle.config[key])
            f.attrs["config_json"] = json.dumps(bundle.config, sort_keys=True)
    except OSError as exc:
        if path.exists():
            path.unlink()
        raise OSError(exc.errno, f"cannot write {path}: {exc}") from exc
    except BaseException:
        if path.exists():
            path.unlink()
        raise
    return path


def read_hdf5(path) -> DatasetBundle:
    path = Path(path)
    with h5py.File(path, "r") as f:
        version = f.attrs.get("version")
        if version is None:
            raise FormatError(f"{path}: missing version attribute")
        if isinstance(version, bytes):
            version = version.decode()
        major = str(version).split(".")[0]
        if major != FORMAT_VERSION.split(".")[0]:
            raise FormatError(f"{path}: unsupported format version {version} "
                              f"(this reader handles {FORMAT_VERSION.split('.')[0]}.x)")
        for member in _REQUIRED:
            if member not in f:
                raise FormatError(f"{path}: missing {member}")
        w = f["weights"]
        weights = BlendWeights(
            w["row_offsets"][()], w["indices"][()], w["values"][()],
            int(w.attrs["n_trans"]), int(w.attrs["k_min"]), int(w.attrs["k_max"]),
        )
        config = json.loads(f.attrs["config_json"]) if "config_json" in f.attrs else {}
        return DatasetBundle(
            features=f["features"][()],
            labels=f["labels"][()],
            usefulness=f["hidden/usefulness"][()],
            true_mask=f["hidden/true_mask"][()].astype(bool),
            alpha=f["noise/alpha"][()],
            weights=weights,
            config=config,
            positivity_shift=float(f.attrs.get("positivity_shift", 0.0)),
            hidden=f["hidden/features"][()] if "hidden/features" in f else None,
            locations=f["hidden/locations"][()] if "hidden/locations" in f else None,
        )


def _write_matrix_csv(path: Path, matrix: np.ndarray, prefix: str):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"{prefix}{j}" for j in range(matrix.shape[1])])
        for row in matrix:
            writer.writerow([format(x, ".17g") for x in row])


def export_csv(bundle: DatasetBundle, directory) -> list[Path]:
    """Write ``features.csv`` and ``labels.csv`` (plus ``hidden.csv`` if stored)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    _write_matrix_csv(directory / "features.csv", bundle.features, "f")
    written.append(directory / "features.csv")
    with open(directory / "labels.csv", "w", newline="") as fh:
        fh.write("label\n")
        fh.writelines(f"{int(y)}\n" for y in bundle.labels)
    written.append(directory / "labels.csv")
    if bundle.hidden is not None:
        _write_matrix_csv(directory / "hidden.csv", bundle.hidden, "h")
        written.append(directory / "hidden.csv")
    return written


def read_csv_matrix(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
