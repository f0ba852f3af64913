"""At-most-one-changepoint test: max split statistic and its permutation test.

The observed statistic is the maximum of the split curve over the admissible
range; significance comes from R random reorderings of the same Gram matrix
(kernel values are permutation-invariant, so nothing is recomputed).  The
p-value is the strict exceedance fraction #{r : T^(r) > T} / R, which gives
an exact level-alpha test for exchangeable data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .mmd import admissible_range, rho_curve
from .rng import derive_seed, permutation_stream, TAG_SEGMENT

# Both sides of any tested split keep at least this many observations, on
# top of the delta exclusion; recursion on short segments must terminate.
MIN_SIDE = 2
MIN_SEGMENT = 2 * MIN_SIDE


@dataclass(frozen=True)
class AmocConfig:
    """Parameters of the permutation test (and of the detectors built on it)."""

    delta: float = 0.05
    R: int = 199
    alpha: float = 0.05
    seed: int = 0
    add_one: bool = False  # opt-in (1 + #{T^(r) >= T}) / (R + 1) variant

    def __post_init__(self):
        if not 0.0 < self.delta < 0.5:
            raise ConfigurationError(f"delta must lie in (0, 1/2), got {self.delta}")
        if self.R < 1:
            raise ConfigurationError(f"R must be >= 1, got {self.R}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(f"alpha must lie in (0, 1), got {self.alpha}")
        if int(self.seed) < 0:
            raise ConfigurationError(f"seed must be non-negative, got {self.seed}")


@dataclass(frozen=True)
class AmocResult:
    """Outcome of one permutation test on a block of m observations.

    tau_hat is the split index local to the block; offset + tau_hat is the
    boundary in full-sequence coordinates.
    """

    n: int
    offset: int
    T_n: float
    tau_hat: int
    gamma_hat: float
    p_value: float
    reject: bool
    permutation_stats: np.ndarray = field(repr=False)


def splittable(m: int, delta: float) -> bool:
    """True when a block of m observations admits at least one tested split."""
    if m < MIN_SEGMENT:
        return False
    try:
        admissible_range(m, delta, MIN_SIDE)
    except ConfigurationError:
        return False
    return True


def amoc_statistic(gram: np.ndarray, delta: float, order=None) -> tuple[float, int]:
    """(max, smallest argmax) of the split curve over the admissible range."""
    curve = rho_curve(gram, delta, order=order, min_side=MIN_SIDE)
    return curve.max_value, curve.argmax_t


def permutation_test(
    gram: np.ndarray,
    config: AmocConfig,
    start: int = 0,
    stop: int | None = None,
    stream_seed: int | None = None,
    permutations=None,
) -> AmocResult:
    """Exact permutation test on the block [start, stop) of the Gram matrix.

    Permutation r is drawn from the deterministic stream keyed by
    (stream_seed, r), so results do not depend on evaluation order; the
    block of the shared Gram matrix is reindexed per permutation, never
    recomputed.  `permutations` injects explicit reorderings (testing hook).
    """
    n = gram.shape[0]
    stop = n if stop is None else stop
    if not 0 <= start < stop <= n:
        raise ConfigurationError(f"invalid block [{start}, {stop}) for n={n}")
    m = stop - start
    if not splittable(m, config.delta):
        raise ConfigurationError(f"block of {m} observations is too short to test")
    seed = config.seed if stream_seed is None else stream_seed

    block = gram[start:stop, start:stop]
    observed = rho_curve(block, config.delta, min_side=MIN_SIDE)

    if permutations is None:
        draws = (
            permutation_stream(seed, r).permutation(m) for r in range(1, config.R + 1)
        )
        n_draws = config.R
    else:
        draws = iter(permutations)
        n_draws = len(permutations)
    stats = np.empty(n_draws)
    for i, perm in enumerate(draws):
        stats[i] = rho_curve(block, config.delta, order=perm, min_side=MIN_SIDE).max_value

    if config.add_one:
        p_value = (1 + int(np.count_nonzero(stats >= observed.max_value))) / (n_draws + 1)
    else:
        p_value = int(np.count_nonzero(stats > observed.max_value)) / n_draws
    # T = 0 is the statistic's minimum (all splits indistinguishable); the
    # strict-exceedance count would report p = 0 there, so rejection also
    # requires positive evidence.  Matters only for degenerate blocks.
    return AmocResult(
        n=m,
        offset=start,
        T_n=observed.max_value,
        tau_hat=observed.argmax_t,
        gamma_hat=observed.argmax_t / m,
        p_value=p_value,
        reject=p_value < config.alpha and observed.max_value > 0.0,
        permutation_stats=stats,
    )


@dataclass(frozen=True)
class AmocDecision:
    """amoc_detect outcome: a boundary (absolute coordinates) or a reason."""

    boundary: int | None
    status: str  # "rejected" | "accepted" | "too_short"
    result: AmocResult | None


def amoc_detect(
    gram: np.ndarray,
    config: AmocConfig,
    start: int = 0,
    stop: int | None = None,
    stream_seed: int | None = None,
) -> AmocDecision:
    """Test one block; report its boundary when the test rejects.

    Blocks too short to test yield status "too_short" rather than an error
    so that recursive segmentation terminates gracefully.
    """
    n = gram.shape[0]
    stop = n if stop is None else stop
    if not splittable(stop - start, config.delta):
        return AmocDecision(boundary=None, status="too_short", result=None)
    res = permutation_test(gram, config, start, stop, stream_seed=stream_seed)
    if res.reject:
        return AmocDecision(boundary=start + res.tau_hat, status="rejected", result=res)
    return AmocDecision(boundary=None, status="accepted", result=res)


def segment_seed(config: AmocConfig, start: int, stop: int, n: int) -> int:
    """Permutation-stream seed for a block: config.seed at the root, a
    coordinate-derived seed below it (independent of recursion order)."""
    if start == 0 and stop == n:
        return config.seed
    return derive_seed(config.seed, TAG_SEGMENT, start, stop)
