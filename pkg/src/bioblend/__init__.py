"""Synthetic ultra-high dimensional, multi-class feature spaces."""
from .blender import BlendWeights, blend, make_weights
from .config import GeneratorConfig, validate_config
from .dataset import DatasetBundle, export_csv, read_hdf5, write_hdf5
from .errors import BioblendError, ConfigError, FormatError, InvariantError
from .pipeline import run_pipeline
from .rand import RandomStream

__version__ = "0.1.0"

__all__ = [
    "BlendWeights", "blend", "make_weights", "GeneratorConfig", "validate_config",
    "DatasetBundle", "export_csv", "read_hdf5", "write_hdf5", "BioblendError",
    "ConfigError", "FormatError", "InvariantError", "run_pipeline", "RandomStream",
]
