"""Kronecker product and Kronecker sum on symbol matrices.

Symbol matrices are plain 2-D integer arrays with entries in
[0, order) of the field supplied alongside.  The product combines
entries with field multiplication; the sum is A (x) J + J (x) B with
field addition, J being the all-ones matrix of the complementary shape
(synthesized internally, never passed in).
"""

from __future__ import annotations

import numpy as np

from .gf import GaloisField


def _as_symbols(m, field: GaloisField, name: str) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D matrix")
    if a.min() < 0 or a.max() >= field.order:
        raise ValueError(
            f"{name} has symbols outside [0, {field.order - 1}]"
        )
    return a.astype(np.int64, copy=False)


def _blockwise(a: np.ndarray, b: np.ndarray, table: np.ndarray) -> np.ndarray:
    m, n = a.shape
    p, q = b.shape
    # index [i1, i2, j1, j2] -> table[a[i1, j1], b[i2, j2]]
    out = table[a[:, None, :, None], b[None, :, None, :]]
    return out.reshape(m * p, n * q)


def kron_product(a, b, field: GaloisField) -> np.ndarray:
    """Kronecker product with entries multiplied in the field.

    Entry [(i1*p + i2), (j1*q + j2)] equals a[i1, j1] * b[i2, j2].
    """
    a = _as_symbols(a, field, "a")
    b = _as_symbols(b, field, "b")
    return _blockwise(a, b, field.mul_table)


def kron_sum(a, b, field: GaloisField) -> np.ndarray:
    """Kronecker sum: every entry of a added (in the field) to every
    entry of b, laid out in the same block pattern as the product."""
    a = _as_symbols(a, field, "a")
    b = _as_symbols(b, field, "b")
    return _blockwise(a, b, field.add_table)
