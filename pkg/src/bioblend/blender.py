"""Sparse Dirichlet mixing of transitional features into visible ones."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, InvariantError
from .rand import RandomStream

BLEND_MODES = ("linear", "logarithmic")
POSITIVITY = ("exp", "shift")

# exp() overflows float64 just above 709.78
_EXP_LIMIT = 700.0


@dataclass
class BlendWeights:
    """Row-sparse weight matrix, one row per visible feature (CSR layout).

    Row ``j`` holds transitional indices ``indices[row_offsets[j]:row_offsets[j+1]]``
    with the matching ``values``; every row sums to one.
    """

    row_offsets: np.ndarray
    indices: np.ndarray
    values: np.ndarray
    n_trans: int
    k_min: int = 1
    k_max: int = 1

    @property
    def n_visible(self) -> int:
        return len(self.row_offsets) - 1

    @property
    def row_counts(self) -> np.ndarray:
        return np.diff(self.row_offsets)

    def row(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.row_offsets[j], self.row_offsets[j + 1]
        return self.indices[lo:hi], self.values[lo:hi]

    def to_csr(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.values, self.indices, self.row_offsets),
                             shape=(self.n_visible, self.n_trans))

    def to_dense(self) -> np.ndarray:
        return self.to_csr().toarray()


def make_weights(stream: RandomStream, f_visible: int, f_trans: int,
                 k_min: int = 2, k_max: int = 4, concentration: float = 1.0) -> BlendWeights:
    """Draw a sparse weight row per visible feature.

    Each row blends ``k ~ U{k_min..k_max}`` distinct transitional features
    (indices stored ascending) with symmetric Dirichlet weights.
    """
    problems = []
    if f_visible < 1:
        problems.append("number of visible features must be >= 1")
    if not 1 <= k_min <= k_max:
        problems.append(f"need 1 <= k_min <= k_max, got k_min={k_min}, k_max={k_max}")
    if k_max > f_trans:
        problems.append(f"k_max={k_max} exceeds the number of transitional features ({f_trans})")
    if not concentration > 0:
        problems.append("Dirichlet concentration must be > 0")
    if problems:
        raise ConfigError(problems)

    counts = stream.draw_discrete_uniform(k_min, k_max, f_visible)
    offsets = np.zeros(f_visible + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    indices = np.empty(offsets[-1], dtype=np.int64)
    values = np.empty(offsets[-1])
    for j, k in enumerate(counts):
        lo, hi = offsets[j], offsets[j + 1]
        indices[lo:hi] = np.sort(stream.sample_without_replacement(f_trans, int(k)))
        values[lo:hi] = stream.draw_dirichlet(concentration, int(k))
    return BlendWeights(offsets, indices, values, f_trans, k_min, k_max)


def positivity_shift(values: np.ndarray) -> float:
    """Global shift ``1 - min`` that makes every operand at least one."""
    return 1.0 - float(np.min(values))


def _blend_block(block: np.ndarray, csr: sp.csr_matrix, mode: str, shift: float,
                 positivity: str) -> np.ndarray:
    if mode == "linear":
        return np.asarray((csr @ block.T).T)
    if positivity == "exp":
        # operands are exp(block), so their logarithms are the block itself
        return np.exp(np.asarray((csr @ block.T).T))
    shifted = block + shift
    if shifted.size and shifted.min() <= 0:
        raise InvariantError("logarithmic blend received a nonpositive operand after shifting")
    return np.exp(np.asarray((csr @ np.log(shifted).T).T))


def blend(values: np.ndarray, weights: BlendWeights, mode: str = "linear",
          shift: float | None = None, positivity: str = "shift",
          block_rows: int = 256, threads: int = 1) -> np.ndarray:
    """Mix a samples x transitional matrix into samples x visible features.

    ``linear`` mode takes weighted sums. ``logarithmic`` mode takes the
    product of weighted powers ``prod_t x_t ** w_t`` of positive operands
    ``x``, computed as ``exp(sum_t w_t * ln x_t)``. How ``values`` are made
    positive is set by ``positivity``:

    ``"shift"``
        ``x = values + shift``; ``shift`` defaults to :func:`positivity_shift`.
    ``"exp"``
        ``x = exp(values)``, so the output is ``exp`` of the linear blend.

    Work is done in row blocks, and each output cell's summation order is
    fixed by the weight layout, so the result does not depend on
    ``block_rows`` or ``threads``.
    """
    if mode not in BLEND_MODES:
        raise ConfigError(f"blending mode must be one of {BLEND_MODES}, got {mode!r}")
    if positivity not in POSITIVITY:
        raise ConfigError(f"positivity must be one of {POSITIVITY}, got {positivity!r}")
    values = np.asarray(values, dtype=float)
    if values.shape[1] != weights.n_trans:
        raise ConfigError(f"matrix has {values.shape[1]} columns, weights expect {weights.n_trans}")
    if mode == "logarithmic" and positivity == "exp":
        shift = 0.0
        if values.size and np.abs(values).max() > _EXP_LIMIT:
            raise InvariantError("transitional values too large for exp positivity; use shift")
    elif mode == "logarithmic" and shift is None:
        shift = positivity_shift(values)
    csr = weights.to_csr()
    out = np.empty((values.shape[0], weights.n_visible))
    starts = range(0, values.shape[0], block_rows)

    def work(start):
        stop = min(start + block_rows, values.shape[0])
        out[start:stop] = _blend_block(values[start:stop], csr, mode, shift or 0.0, positivity)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(work, starts))
    else:
        for start in starts:
            work(start)
    return out
