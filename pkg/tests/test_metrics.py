import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mmdseg import (
    AmocConfig,
    BenchmarkCell,
    ModelSpec,
    Segmentation,
    hausdorff,
    match,
    run_benchmark,
    subset_match,
    superset_match,
)
from mmdseg.errors import ConfigurationError


def seg(n, *bs):
    return Segmentation(n, tuple(bs))


def test_match_examples():
    assert match(seg(300, 100, 200), seg(300, 100, 200))
    assert match(seg(300, 101, 199), seg(300, 100, 200))
    assert not match(seg(300, 100), seg(300, 100, 200))
    assert not match(seg(300, 102, 200), seg(300, 100, 200))
    assert match(seg(300), seg(300))


def test_superset_examples():
    assert superset_match(seg(300, 50, 100, 200), seg(300, 100, 200))
    assert not superset_match(seg(300, 100, 200), seg(300, 100, 200))
    assert not superset_match(seg(300, 50, 150), seg(300, 100))


def test_subset_examples():
    assert subset_match(seg(300, 100), seg(300, 100, 200))
    assert not subset_match(seg(300, 150), seg(300, 100, 200))
    assert subset_match(seg(300), seg(300, 100))  # vacuous on empty estimate


def test_hausdorff_examples():
    assert hausdorff([0.2, 0.4], [0.2, 0.4]) == 0.0
    assert hausdorff([0.25], [0.75]) == pytest.approx(0.5)
    assert hausdorff([0.2, 0.8], [0.25]) == pytest.approx(0.55)
    with pytest.raises(ValueError):
        hausdorff([], [0.5])


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_match_variants_are_mutually_exclusive(seed):
    rng = np.random.default_rng(seed)
    n = 50
    est = seg(n, *np.sort(rng.choice(np.arange(1, n), rng.integers(0, 6), replace=False)))
    truth = seg(n, *np.sort(rng.choice(np.arange(1, n), rng.integers(1, 5), replace=False)))
    flags = [match(est, truth), superset_match(est, truth), subset_match(est, truth)]
    assert sum(flags) <= 1


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_match_implies_small_hausdorff(seed):
    rng = np.random.default_rng(seed)
    n = 60
    truth = np.sort(rng.choice(np.arange(3, n - 2, 3), 3, replace=False))
    est = np.sort(truth + rng.integers(-1, 2, size=3))
    if match(seg(n, *est), seg(n, *truth)):
        d = hausdorff(est / n, truth / n)
        assert d <= 1.0 / n + 1e-12


def test_run_benchmark_single_replication_rates_are_binary():
    cell = BenchmarkCell(
        model=ModelSpec("N4", (30,)),
        algorithm="u",
        config=AmocConfig(R=19),
    )
    report = run_benchmark([cell], replications=1, seed=5)
    row = report.to_rows()[0]
    for key in ("rate_k_correct", "rate_match", "rate_superset", "rate_subset"):
        assert row[key] in (0.0, 1.0)
    assert row["replications"] == 1


def test_run_benchmark_is_deterministic_and_validates():
    cell = BenchmarkCell(model=ModelSpec("N4", (24,)), algorithm="u", config=AmocConfig(R=9))
    a = run_benchmark([cell], replications=3, seed=7).to_rows()[0]
    b = run_benchmark([cell], replications=3, seed=7).to_rows()[0]
    for key in ("rate_k_correct", "rate_match", "rate_superset", "rate_subset"):
        assert a[key] == b[key]
    assert a["rate_match"] <= a["rate_k_correct"]
    with pytest.raises(ConfigurationError):
        run_benchmark([cell], replications=0)
    with pytest.raises(ConfigurationError):
        BenchmarkCell(model=ModelSpec("N4", (24,)), algorithm="s")  # K missing
