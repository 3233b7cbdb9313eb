"""Independent reference implementations used as test oracles.

Everything here computes spanning quantities by explicit pairwise
enumeration (directly or via scipy's pdist), never through the running-sum
identity the package uses, so agreement is evidence rather than tautology.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import pdist


def pairwise_spanning(points) -> float:
    """Sum of squared distances over unordered pairs, by explicit double loop."""
    pts = [np.atleast_1d(np.asarray(p, dtype=float)) for p in points]
    total = 0.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            diff = pts[i] - pts[j]
            total += float(diff @ diff)
    return total


def pairwise_spanning_fast(points: np.ndarray) -> float:
    """Same quantity via scipy's pairwise distances (for bulk checks)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] < 2:
        return 0.0
    return float(pdist(pts, "sqeuclidean").sum())


def naive_decomposition(window: np.ndarray) -> dict[str, float]:
    """Full/half/between/residual spanning distances by enumeration."""
    w = np.asarray(window, dtype=float)
    n = w.shape[0] // 2
    w_full = pairwise_spanning_fast(w)
    w_left = pairwise_spanning_fast(w[:n])
    w_right = pairwise_spanning_fast(w[n:])
    return {
        "w_full": w_full,
        "w_left": w_left,
        "w_right": w_right,
        "w_btw": w_full - w_left - w_right,
        "w_rem": w_full - 2.0 * (w_left + w_right),
    }
