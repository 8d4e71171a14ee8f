"""Deterministic reductions for quadrature sums.

Every integral in the package is reduced through :func:`pairwise_sum`, a fixed
pairwise tree whose evaluation order depends only on the length of the input.
Results are therefore bit-stable across runs and across worker scheduling.
"""

from __future__ import annotations

import numpy as np


def pairwise_sum(values: np.ndarray) -> float:
    """Sum a 1-D array with a fixed pairwise reduction tree."""
    a = np.asarray(values, dtype=float).ravel().copy()
    n = a.size
    if n == 0:
        return 0.0
    while n > 1:
        half = n // 2
        a[:half] += a[half : 2 * half]
        if n % 2:
            # odd tail folds into slot 0, always
            a[0] += a[n - 1]
        n = half
    return float(a[0])


def pairwise_dot(weights: np.ndarray, values: np.ndarray) -> float:
    """Quadrature contraction sum(w*f) with the deterministic reduction."""
    w = np.asarray(weights, dtype=float)
    f = np.asarray(values, dtype=float)
    if w.shape != f.shape:
        raise ValueError(f"weight/value shape mismatch: {w.shape} vs {f.shape}")
    return pairwise_sum(w * f)
