"""Scale-preserving polynomial expansion of hidden features."""
from __future__ import annotations

from itertools import combinations_with_replacement
from math import comb
from typing import Iterator

import numpy as np


def count_transitional(f_hidden: int, d: int) -> int:
    """Number of monomials of degree 1..d over ``f_hidden`` variables."""
    if d < 1:
        raise ValueError(f"polynomial degree must be >= 1, got {d}")
    if f_hidden < 1:
        raise ValueError(f"need at least one hidden feature, got {f_hidden}")
    return comb(f_hidden + d, d) - 1


def monomials(f_hidden: int, d: int) -> Iterator[tuple[int, ...]]:
    """Index multisets, degree-major, lexicographic within a degree."""
    if d < 1:
        raise ValueError(f"polynomial degree must be >= 1, got {d}")
    for degree in range(1, d + 1):
        yield from combinations_with_replacement(range(f_hidden), degree)


def signed_root(p, g: int):
    """``sign(p) * |p| ** (1/g)``; exact pass-through for ``g == 1``."""
    p = np.asarray(p, dtype=float)
    if g == 1:
        return p.copy()
    if g == 2:
        return np.copysign(np.sqrt(np.abs(p)), p)
    if g == 3:
        return np.cbrt(p)
    return np.copysign(np.abs(p) ** (1.0 / g), p)


def expand_columns(values: np.ndarray, d: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Transitional columns ``start:stop`` (monomial order) of ``values``.

    Lets callers stream the expansion in column blocks without materializing
    all of it.
    """
    values = np.asarray(values, dtype=float)
    n_rows, f_hidden = values.shape
    total = count_transitional(f_hidden, d)
    stop = total if stop is None else min(stop, total)
    out = np.empty((n_rows, max(stop - start, 0)))
    for t, mono in enumerate(monomials(f_hidden, d)):
        if t >= stop:
            break
        if t < start:
            continue
        if len(mono) == 1:
            out[:, t - start] = values[:, mono[0]]
            continue
        prod = values[:, mono[0]] * values[:, mono[1]]
        for idx in mono[2:]:
            prod *= values[:, idx]
        out[:, t - start] = signed_root(prod, len(mono))
    return out


def expand(values: np.ndarray, d: int) -> np.ndarray:
    """All degree-1..d transitional features of a samples x hidden matrix.

    For a monomial of degree g over columns j1..jg the output column is the
    signed g-th root of the elementwise product; degree-1 columns are copies
    of the inputs.
    """
    return expand_columns(values, d)
