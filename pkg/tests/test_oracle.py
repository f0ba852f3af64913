import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mmdseg import (
    gram_matrix,
    median_heuristic,
    mixture_mmd,
    mmd_squared_groups,
    oracle_curve,
    oracle_rho_single,
    oracle_rho_two,
    rho_curve,
)
from mmdseg.errors import ConfigurationError

from reference import (
    naive_mmd_groups,
    separated_pools,
    single_boundary_curve,
    two_boundary_branches,
)


def labeled_gram(seed, sizes, gap=3.0, p=6):
    rng = np.random.default_rng(seed)
    X = separated_pools(rng, sizes, p=p, gap=gap)
    return gram_matrix(X, median_heuristic(X))


def test_single_peak_value_at_boundary():
    n1, n2 = 6, 9
    G = labeled_gram(0, (n1, n2))
    n = n1 + n2
    d = mmd_squared_groups(G, range(n1), range(n1, n))
    assert oracle_rho_single(G, n1, n1) == pytest.approx(n1 * n2 * d / n**2, abs=1e-12)


def test_single_zero_when_pools_identical():
    G = np.ones((10, 10))
    for r in range(1, 10):
        assert oracle_rho_single(G, 4, r) == 0.0


def test_single_matches_hand_expansion():
    G = labeled_gram(3, (3, 3))
    d = naive_mmd_groups(G, range(3), range(3, 6))
    expected = single_boundary_curve(d, 6, 3)
    got = np.array([oracle_rho_single(G, 3, r) for r in range(1, 6)])
    assert np.max(np.abs(got - expected)) < 1e-12


def test_single_rejects_out_of_range():
    G = labeled_gram(1, (4, 4))
    with pytest.raises(ConfigurationError):
        oracle_rho_single(G, 8, 2)
    with pytest.raises(IndexError):
        oracle_rho_single(G, 4, 8)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_single_monotone_and_peaked_at_boundary(seed):
    rng = np.random.default_rng(seed)
    n1 = int(rng.integers(2, 12))
    n2 = int(rng.integers(2, 12))
    G = labeled_gram(seed, (n1, n2))
    vals = np.array([oracle_rho_single(G, n1, r) for r in range(1, n1 + n2)])
    assert np.all(np.diff(vals[:n1]) >= -1e-12)
    assert np.all(np.diff(vals[n1 - 1 :]) <= 1e-12)
    assert int(np.argmax(vals)) + 1 == n1


def test_two_zero_when_all_pools_identical():
    G = np.ones((12, 12))
    for r in range(1, 12):
        assert oracle_rho_two(G, 4, 4, r) == 0.0


def test_two_matches_branch_formulas():
    n1, n2, n3 = 4, 5, 6
    n = n1 + n2 + n3
    G = labeled_gram(8, (n1, n2, n3))
    d12 = naive_mmd_groups(G, range(n1), range(n1, n1 + n2))
    d13 = naive_mmd_groups(G, range(n1), range(n1 + n2, n))
    d23 = naive_mmd_groups(G, range(n1, n1 + n2), range(n1 + n2, n))
    b1, b2, b3 = two_boundary_branches(d12, d13, d23, n, n1, n2)
    for r in range(1, n):
        expected = b1(r) if r <= n1 else b2(r) if r <= n1 + n2 else b3(r)
        assert oracle_rho_two(G, n1, n2, r) == pytest.approx(expected, abs=1e-12)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_two_branches_agree_at_first_boundary(seed):
    rng = np.random.default_rng(seed)
    n1, n2, n3 = (int(rng.integers(3, 9)) for _ in range(3))
    n = n1 + n2 + n3
    G = labeled_gram(seed, (n1, n2, n3))
    d12 = mmd_squared_groups(G, range(n1), range(n1, n1 + n2))
    d13 = mmd_squared_groups(G, range(n1), range(n1 + n2, n))
    d23 = mmd_squared_groups(G, range(n1, n1 + n2), range(n1 + n2, n))
    b1, b2, _ = two_boundary_branches(d12, d13, d23, n, n1, n2)
    assert b1(n1) == pytest.approx(b2(n1), abs=1e-9)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_two_convex_between_boundaries(seed):
    rng = np.random.default_rng(seed)
    n1, n2, n3 = (int(rng.integers(4, 12)) for _ in range(3))
    G = labeled_gram(seed, (n1, n2, n3))
    vals = [oracle_rho_two(G, n1, n2, r) for r in range(n1 + 1, n1 + n2 + 1)]
    second = np.diff(vals, 2)
    assert second.size == 0 or np.min(second) >= -1e-9


def test_two_boundary_data_peaks_at_second_boundary():
    # eigenvalue-change data whose labeled curve has its single prominent
    # maximum at the second boundary, which is what motivates recursion
    from mmdseg import ModelSpec, generate

    sample = generate(ModelSpec("10", (100, 100, 100), seed=4))
    G = gram_matrix(sample.data, median_heuristic(sample.data))
    vals = np.array([oracle_rho_two(G, 100, 100, r) for r in range(1, 300)])
    assert int(np.argmax(vals)) + 1 == 200


def test_oracle_curve_dispatch_and_limits():
    G = labeled_gram(6, (5, 7))
    curve = oracle_curve(G, (5, 7))
    assert curve.shape == (11,)
    with pytest.raises(ConfigurationError):
        oracle_curve(G, (5, 6))  # wrong total
    with pytest.raises(ConfigurationError):
        oracle_curve(G, (3, 3, 3, 3))  # no closed form for 3 boundaries


def test_empirical_argmax_tracks_boundary_on_separated_pools():
    hits = 0
    for seed in range(20):
        G = labeled_gram(seed, (100, 200), gap=5.0)
        c = rho_curve(G, 0.05)
        hits += abs(c.argmax_t - 100) <= 3
    assert hits >= 18  # 90% of seeds


# mixture identity ----------------------------------------------------------


def test_mixture_equal_weights_is_zero():
    G = labeled_gram(2, (6, 6))
    assert mixture_mmd(G, range(6), range(6, 12), 0.4, 0.4) == pytest.approx(
        0.0, abs=1e-12
    )


def test_mixture_extreme_weights_recover_pool_distance():
    G = labeled_gram(2, (6, 9))
    d = mmd_squared_groups(G, range(6), range(6, 15))
    assert mixture_mmd(G, range(6), range(6, 15), 1.0, 0.0) == pytest.approx(
        d, abs=1e-12
    )


def test_mixture_half_weight_quarters_distance():
    G = labeled_gram(7, (8, 8))
    d = mmd_squared_groups(G, range(8), range(8, 16))
    assert mixture_mmd(G, range(8), range(8, 16), 0.5, 0.0) == pytest.approx(
        d / 4.0, abs=1e-12
    )


def test_mixture_identity_on_weight_grid():
    G = labeled_gram(13, (10, 14))
    d = naive_mmd_groups(G, range(10), range(10, 24))
    for alpha in (0.0, 0.25, 0.5, 0.75, 1.0):
        for beta in (0.0, 0.25, 0.5, 0.75, 1.0):
            assert mixture_mmd(G, range(10), range(10, 24), alpha, beta) == (
                pytest.approx((alpha - beta) ** 2 * d, abs=1e-12)
            )
