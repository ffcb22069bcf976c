"""Seeded, forkable random streams.

Every pipeline stage draws from its own child stream, derived only from the
root seed and the path of fork labels. Child streams are built on Philox, a
counter-based generator, keyed through ``numpy.random.SeedSequence``; so
adding draws to one stage never shifts the numbers seen by another.
"""
from __future__ import annotations

import hashlib

import numpy as np

from .errors import ConfigError

__all__ = ["RandomStream", "label_key"]

_UINT64_MAX = 2**64 - 1


def label_key(label: str) -> int:
    """Stable 64-bit integer derived from a fork label."""
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


class RandomStream:
    """A deterministic random source identified by ``(seed, label path)``.

    Not safe to share between threads; fork one child per worker instead.
    """

    def __init__(self, seed: int, _path: tuple[str, ...] = ()):
        seed = int(seed)
        if not 0 <= seed <= _UINT64_MAX:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self.path = tuple(_path)
        seq = np.random.SeedSequence(
            entropy=seed, spawn_key=tuple(label_key(lab) for lab in self.path)
        )
        self._gen = np.random.Generator(np.random.Philox(seq))
        self._children: set[str] = set()

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, path={'/'.join(self.path) or '<root>'})"

    def fork(self, label: str) -> RandomStream:
        """Return an independent child stream keyed by ``label``.

        The child depends only on the parent's seed and path plus ``label``,
        never on how many numbers the parent (or a sibling) has drawn.
        """
        if not isinstance(label, str) or not label:
            raise ConfigError("fork label must be a nonempty string")
        if label in self._children:
            raise ConfigError(f"stream {self!r} already forked label {label!r}")
        self._children.add(label)
        return RandomStream(self.seed, self.path + (label,))

    # -- distribution samplers ------------------------------------------------

    def draw_normal(self, mean: float, scale: float, n: int) -> np.ndarray:
        if scale < 0:
            raise ValueError(f"scale must be >= 0, got {scale}")
        if n < 0:
            raise ValueError(f"n must be >= 0, got {n}")
        if scale == 0:
            return np.full(n, float(mean))
        return mean + scale * self._gen.standard_normal(n)

    def draw_uniform(self, location: float, length: float, n: int) -> np.ndarray:
        """Draw from ``[location, location + length)``."""
        if length < 0:
            raise ValueError(f"length must be >= 0, got {length}")
        if n < 0:
            raise ValueError(f"n must be >= 0, got {n}")
        if length == 0:
            return np.full(n, float(location))
        return location + length * self._gen.random(n)

    def draw_dirichlet(self, concentration: float, k: int) -> np.ndarray:
        """Symmetric Dirichlet draw via normalized Gamma variates."""
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if not concentration > 0:
            raise ValueError(f"concentration must be > 0, got {concentration}")
        if k == 1:
            return np.ones(1)
        while True:
            g = self._gen.standard_gamma(concentration, k)
            # a zero gamma variate would leave a zero weight on the simplex
            if np.all(g > 0):
                return g / g.sum()

    def draw_discrete_uniform(self, lo: int, hi: int, n: int) -> np.ndarray:
        """Integers in ``{lo, ..., hi}`` inclusive, equiprobable."""
        if lo > hi:
            raise ValueError(f"lo must be <= hi, got lo={lo}, hi={hi}")
        if n < 0:
            raise ValueError(f"n must be >= 0, got {n}")
        return self._gen.integers(lo, hi, size=n, endpoint=True, dtype=np.int64)

    # -- bulk helpers used by the pipeline stages -----------------------------

    def standard_normal(self, shape) -> np.ndarray:
        return self._gen.standard_normal(shape)

    def random(self, shape) -> np.ndarray:
        return self._gen.random(shape)

    def geometric(self, mean: float) -> int:
        """One draw from the geometric law on {1, 2, ...} with the given mean."""
        if mean < 1:
            raise ValueError(f"geometric mean must be >= 1, got {mean}")
        if mean == 1:
            return 1
        return int(self._gen.geometric(1.0 / mean))

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def sample_without_replacement(self, population: int, k: int) -> np.ndarray:
        if not 0 <= k <= population:
            raise ValueError(f"cannot pick {k} distinct items out of {population}")
        return self._gen.choice(population, size=k, replace=False)
