"""Curve geometry and Gaussian-kernel machinery shared by every detector.

Observations are curves sampled on a common grid of p points in [0, 1],
stored row-wise in an (n, p) array.  Distances use the scaled L2 norm
sqrt((1/p) * sum (a_j - b_j)^2), the Riemann approximation of the L2[0, 1]
norm, so the bandwidth and kernel values are grid-resolution independent.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import ConfigurationError, DataError, DegenerateBandwidthError


def as_dataset(data) -> np.ndarray:
    """Validate and return observations as an (n, p) float64 array."""
    X = np.asarray(data, dtype=np.float64)
    if X.ndim != 2:
        raise DataError(f"dataset must be 2-dimensional, got shape {X.shape}")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise DataError(f"dataset must be non-empty, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise DataError("dataset contains non-finite values")
    return X


def as_curve(values) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise DataError(f"curve must be a non-empty 1-d sequence, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise DataError("curve contains non-finite values")
    return v


def l2_distance(a, b) -> float:
    """Scaled L2 distance sqrt((1/p) * sum (a_j - b_j)^2) between two curves."""
    av, bv = as_curve(a), as_curve(b)
    if av.shape != bv.shape:
        raise DataError(f"grid sizes differ: {av.size} vs {bv.size}")
    diff = av - bv
    return float(np.sqrt(diff.dot(diff) / av.size))


def pairwise_distances(data) -> np.ndarray:
    """Condensed vector of the n(n-1)/2 pairwise scaled L2 distances."""
    X = as_dataset(data)
    if X.shape[0] < 2:
        raise DataError("need at least two observations for pairwise distances")
    return np.sqrt(pdist(X, "sqeuclidean") / X.shape[1])


def median_heuristic(data) -> float:
    """Bandwidth h = median of all pairwise distances over distinct pairs.

    Even pair counts take the mean of the two central order statistics.
    Raises DegenerateBandwidthError when the median is zero (h must be > 0
    for the Gaussian kernel to be defined).
    """
    h = float(np.median(pairwise_distances(data)))
    if h <= 0.0:
        raise DegenerateBandwidthError(
            "median pairwise distance is zero; bandwidth would be degenerate"
        )
    return h


def gaussian_kernel(a, b, h: float) -> float:
    """k(a, b) = exp(-dist(a, b)^2 / (2 h^2)), a value in (0, 1]."""
    if h <= 0.0:
        raise ConfigurationError(f"bandwidth must be positive, got {h}")
    d = l2_distance(a, b)
    return float(np.exp(-(d * d) / (2.0 * h * h)))


def gram_matrix(data, h: float) -> np.ndarray:
    """Symmetric (n, n) matrix of kernel evaluations with exact unit diagonal.

    Computed once per run and shared read-only by every split statistic and
    permutation sweep; permutations reindex it rather than recompute it.
    """
    X = as_dataset(data)
    if X.shape[0] < 2:
        raise DataError(f"need at least 2 observations, got {X.shape[0]}")
    if h <= 0.0:
        raise ConfigurationError(f"bandwidth must be positive, got {h}")
    d2 = squareform(pdist(X, "sqeuclidean")) / X.shape[1]
    return np.exp(-d2 / (2.0 * h * h))
