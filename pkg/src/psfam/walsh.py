"""Fast Walsh-Hadamard transform in natural (Sylvester) order."""

from __future__ import annotations

import numpy as np


def fwht(a: np.ndarray, axis: int = -1) -> np.ndarray:
    """Return ``out[k] = sum_a a[a] * (-1)^{popcount(a & k)}`` along ``axis``.

    The axis length must be a power of two. Runs in ``O(n log n)`` per slice.
    """
    a = np.moveaxis(np.array(a, copy=True), axis, -1)
    n = a.shape[-1]
    if n & (n - 1):
        raise ValueError(f"length {n} is not a power of two")
    lead = a.shape[:-1]
    h = 1
    while h < n:
        view = a.reshape(*lead, n // (2 * h), 2, h)
        lo = view[..., 0, :].copy()
        hi = view[..., 1, :]
        view[..., 0, :] += hi
        view[..., 1, :] = lo - hi
        h *= 2
    return np.moveaxis(a, -1, axis)
