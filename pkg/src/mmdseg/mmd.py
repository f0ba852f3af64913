"""Empirical squared-MMD V-statistics and the scaled split curve.

The two-sample statistic between index blocks A and B is the V-statistic

    d(A, B) = sum(G[A, A]) / |A|^2 + sum(G[B, B]) / |B|^2
              - 2 sum(G[A, B]) / (|A| |B|)

with diagonal terms included.  The split statistic at split t of an ordered
block of size n is rho(t) = t (n - t) / n^2 * d(first t, rest); its curve
over all admissible t is computed with one prefix-sum sweep, O(n) per split
and O(n^2) total, instead of recomputing the three block sums per split.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import ceil, floor

import numpy as np

from .errors import ConfigurationError

# V-statistics with a PSD kernel are provably >= 0; anything below this is
# floating-point cancellation gone wrong rather than roundoff.
CLAMP_WARN_THRESHOLD = -1e-9


@dataclass(frozen=True)
class RhoCurve:
    """Split-statistic values over the admissible split range.

    values[i] is the statistic at split t = t_min + i; argmax_t is the
    smallest maximizing split.
    """

    t_min: int
    t_max: int
    values: np.ndarray
    argmax_t: int
    max_value: float


def _reindexed(gram: np.ndarray, order) -> np.ndarray:
    if order is None:
        return gram
    idx = np.asarray(order, dtype=np.intp)
    return gram[np.ix_(idx, idx)]


def _clamp_nonnegative(values: np.ndarray | float):
    low = np.min(values) if np.ndim(values) else values
    if low < CLAMP_WARN_THRESHOLD:
        warnings.warn(
            f"split statistic clamped from {low!r} to 0; cancellation beyond "
            f"the {CLAMP_WARN_THRESHOLD} threshold",
            RuntimeWarning,
            stacklevel=3,
        )
    return np.maximum(values, 0.0)


def split_sums(gram: np.ndarray, order=None):
    """Block sums (within_left, within_right, cross) for every split t.

    Returns three arrays of length n - 1; entry t - 1 holds the sums for the
    split putting the first t (reindexed) observations on the left.  The
    conservation identity within_left + within_right + 2 cross == total
    holds at every t up to roundoff.
    """
    P = _reindexed(gram, order)
    n = P.shape[0]
    cs = np.cumsum(P, axis=1)
    ar = np.arange(n)
    row_prefix_diag = cs[ar, ar]  # sum of row i through column i
    diag = np.diagonal(P)
    wl = np.cumsum(2.0 * row_prefix_diag - diag)  # wl[t-1] = sum of P[:t, :t]
    left_rows = np.cumsum(cs[:, -1])  # = within_left + cross
    total = left_rows[-1]
    within_left = wl[:-1]
    cross = left_rows[:-1] - within_left
    within_right = total - 2.0 * left_rows[:-1] + within_left
    return within_left, within_right, cross


def mmd_squared_split(gram: np.ndarray, r: int, order=None) -> float:
    """V-statistic between the first r and the remaining n - r observations."""
    P = _reindexed(gram, order)
    n = P.shape[0]
    if not 1 <= r <= n - 1:
        raise IndexError(f"split {r} out of range [1, {n - 1}]")
    wl = float(P[:r, :r].sum())
    wr = float(P[r:, r:].sum())
    cross = float(P[:r, r:].sum())
    v = wl / (r * r) + wr / ((n - r) * (n - r)) - 2.0 * cross / (r * (n - r))
    return float(_clamp_nonnegative(v))


def mmd_squared_groups(gram: np.ndarray, idx_a, idx_b) -> float:
    """V-statistic between two disjoint, non-empty index sets."""
    a = np.asarray(idx_a, dtype=np.intp)
    b = np.asarray(idx_b, dtype=np.intp)
    if a.size == 0 or b.size == 0:
        raise ValueError("index sets must be non-empty")
    n = gram.shape[0]
    for idx in (a, b):
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise IndexError(f"index set out of range [0, {n - 1}]")
    if np.intersect1d(a, b).size:
        raise ValueError("index sets must be disjoint")
    kaa = float(gram[np.ix_(a, a)].sum())
    kbb = float(gram[np.ix_(b, b)].sum())
    kab = float(gram[np.ix_(a, b)].sum())
    v = kaa / (a.size * a.size) + kbb / (b.size * b.size) - 2.0 * kab / (a.size * b.size)
    return float(_clamp_nonnegative(v))


def admissible_range(n: int, delta: float, min_side: int = 1) -> tuple[int, int]:
    """Split bounds [max(ceil(n delta), min_side), min(floor(n(1-delta)), n - min_side)]."""
    if not 0.0 < delta < 0.5:
        raise ConfigurationError(f"delta must lie in (0, 1/2), got {delta}")
    t_min = max(ceil(n * delta), min_side, 1)
    t_max = min(floor(n * (1.0 - delta)), n - min_side, n - 1)
    if t_min > t_max:
        raise ConfigurationError(
            f"admissible split range is empty for n={n}, delta={delta}, min_side={min_side}"
        )
    return t_min, t_max


def rho_values(gram: np.ndarray, order=None) -> np.ndarray:
    """Split statistic t(n-t)/n^2 * d(first t, rest) for every t = 1..n-1."""
    P = _reindexed(gram, order)
    n = P.shape[0]
    within_left, within_right, cross = split_sums(P)
    t = np.arange(1, n, dtype=np.float64)
    nn = float(n) * float(n)
    values = (within_left * (n - t) / t + within_right * t / (n - t) - 2.0 * cross) / nn
    return _clamp_nonnegative(values)


def rho_curve(gram: np.ndarray, delta: float, order=None, min_side: int = 1) -> RhoCurve:
    """Split curve over the admissible range, with its (max, smallest argmax).

    `order` is a permutation of range(n) (or any index vector selecting and
    ordering a block); Gram entries are reindexed, never recomputed.
    """
    P = _reindexed(gram, order)
    n = P.shape[0]
    t_min, t_max = admissible_range(n, delta, min_side)
    values = rho_values(P)[t_min - 1 : t_max]
    argmax = t_min + int(np.argmax(values))  # first occurrence = smallest t
    return RhoCurve(
        t_min=t_min,
        t_max=t_max,
        values=values,
        argmax_t=argmax,
        max_value=float(values[argmax - t_min]),
    )
