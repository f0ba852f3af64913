import numpy as np
import pytest

from mmdseg import (
    AmocConfig,
    ModelSpec,
    Segmentation,
    detect_forward,
    detect_s,
    detect_ss,
    detect_u,
    generate,
    gram_matrix,
    hausdorff,
    match,
    median_heuristic,
    rho_curve,
)
from mmdseg.errors import ConfigurationError

from reference import separated_pools


CFG = AmocConfig(R=99, seed=42)


def test_segmentation_validation():
    seg = Segmentation(10, (3, 7))
    assert seg.k == 2
    assert seg.breakfractions == (0.3, 0.7)
    assert seg.blocks == ((0, 3), (3, 7), (7, 10))
    with pytest.raises(ConfigurationError):
        Segmentation(10, (0, 5))
    with pytest.raises(ConfigurationError):
        Segmentation(10, (5, 5))


def two_change_data(seed=0, sizes=(60, 60, 60), gap=4.0):
    rng = np.random.default_rng(seed)
    return separated_pools(rng, sizes, p=6, gap=gap)


# unsupervised ---------------------------------------------------------------


def test_u_constant_data_finds_nothing():
    det = detect_u(np.tile(np.linspace(0, 1, 8), (50, 1)) + 0.0, CFG, h=1.0)
    assert det.segmentation.k == 0


def test_u_recovers_two_separated_boundaries():
    det = detect_u(two_change_data(), CFG)
    assert det.segmentation.k == 2
    assert all(abs(b - t) <= 2 for b, t in zip(det.segmentation.boundaries, (60, 120)))


def test_u_every_boundary_has_a_rejecting_test():
    det = detect_u(two_change_data(1), CFG)
    rejected = {
        rec["candidate"] for rec in det.trace if rec["op"] == "test" and rec["reject"]
    }
    assert set(det.segmentation.boundaries) <= rejected
    for rec in det.trace:
        if rec["op"] == "test":
            assert rec["reject"] == (rec["p_value"] < CFG.alpha)


def test_u_deterministic():
    data = two_change_data(2)
    a = detect_u(data, CFG)
    b = detect_u(data, CFG)
    assert a.segmentation == b.segmentation
    assert a.trace == b.trace


# supervised -----------------------------------------------------------------


def test_s_budget_of_one_is_global_argmax():
    data = two_change_data(3)
    det = detect_s(data, 1)
    G = gram_matrix(data, det.bandwidth)
    curve = rho_curve(G, 0.05, min_side=2)
    assert det.segmentation.boundaries == (curve.argmax_t,)


@pytest.mark.parametrize("K", [1, 2, 3, 5])
def test_s_returns_exactly_k_boundaries(K):
    det = detect_s(two_change_data(4), K)
    assert det.segmentation.k == K


def test_s_boundaries_nest_across_budgets():
    data = two_change_data(5)
    h = median_heuristic(data)
    previous: set[int] = set()
    for K in (1, 2, 3, 4):
        det = detect_s(data, K, h=h)
        current = set(det.segmentation.boundaries)
        assert previous <= current
        previous = current


def test_s_rejects_infeasible_budget_upfront():
    with pytest.raises(ConfigurationError):
        detect_s(two_change_data(6)[:10], 5)


def test_s_budget_exhaustion_raises():
    # four well-separated constant pools of 3: splits land on pool edges,
    # after which every block has length 3 < 4 and round 4 finds no split
    data = np.vstack([np.full((3, 4), v) for v in (0.0, 10.0, 20.0, 30.0)])
    with pytest.raises(ConfigurationError, match="budget infeasible"):
        detect_s(data, 4)


@pytest.mark.parametrize(
    "model_id",
    [
        "8",
        pytest.param(
            "10",
            marks=pytest.mark.xfail(
                reason="argmax localization noise floor on eigenvalue-change "
                "models; see decisions ledger / acceptance criteria 6 and 8",
                strict=False,
            ),
        ),
    ],
)
def test_s_faithful_at_desk_scale(model_id):
    # correct budget on a two-boundary model: estimated breakfractions land
    # within 2/n of the truth in nearly every replication
    hits = 0
    for seed in range(10):
        sample = generate(ModelSpec(model_id, (100, 100, 100), seed=seed))
        det = detect_s(sample.data, 2)
        d = hausdorff(det.segmentation.breakfractions, sample.truth.breakfractions)
        hits += d <= 2 / 300
    assert hits >= 9


# semi-supervised ------------------------------------------------------------


def test_ss_rejects_crossed_bounds():
    with pytest.raises(ConfigurationError):
        detect_ss(two_change_data(8), 3, 2, CFG)


def test_ss_equal_bounds_equals_supervised():
    data = two_change_data(9)
    ss = detect_ss(data, 2, 2, CFG)
    s = detect_s(data, 2)
    assert ss.segmentation == s.segmentation
    assert not any(rec["op"] == "pair_test" for rec in ss.trace)


def test_ss_output_within_bounds_and_nested_in_supervised():
    data = two_change_data(10)
    h = median_heuristic(data)
    ss = detect_ss(data, 0, 4, CFG, h=h)
    s = detect_s(data, 4, h=h)
    assert 0 <= ss.segmentation.k <= 4
    assert set(ss.segmentation.boundaries) <= set(s.segmentation.boundaries)


def test_ss_merges_spurious_boundary():
    data = two_change_data(11)
    ss = detect_ss(data, 0, 3, CFG)
    assert ss.segmentation.k == 2
    assert all(abs(b - t) <= 2 for b, t in zip(ss.segmentation.boundaries, (60, 120)))
    assert any(rec["op"] == "merge" for rec in ss.trace)
    levels = [rec["level"] for rec in ss.trace if rec["op"] == "pair_test"]
    stages = [rec["stage"] for rec in ss.trace if rec["op"] == "pair_test"]
    for stage, level in zip(stages, levels):
        assert level == pytest.approx(CFG.alpha / (3 - stage + 1))


def test_ss_can_empty_out_under_null():
    rng = np.random.default_rng(12)
    data = rng.normal(size=(60, 5))
    ss = detect_ss(data, 0, 2, CFG)
    assert ss.segmentation.k == 0


def test_ss_deterministic():
    data = two_change_data(13)
    a = detect_ss(data, 1, 3, CFG)
    b = detect_ss(data, 1, 3, CFG)
    assert a.segmentation == b.segmentation and a.trace == b.trace


# forward --------------------------------------------------------------------


def test_forward_zero_lower_bound_is_pure_unsupervised():
    data = two_change_data(14)
    fwd = detect_forward(data, 0, CFG)
    unsup = detect_u(data, CFG)
    assert fwd.segmentation == unsup.segmentation
    assert fwd.algorithm == "u"


def test_forward_constant_data_keeps_only_forced_boundary():
    data = np.tile(np.linspace(0, 1, 6), (40, 1))
    fwd = detect_forward(data, 1, CFG, h=1.0)
    assert fwd.segmentation.k == 1


def test_forward_finds_remaining_boundary():
    hits = 0
    for seed in range(10):
        data = two_change_data(seed + 20)
        fwd = detect_forward(data, 1, AmocConfig(R=99, seed=seed))
        hits += match(fwd.segmentation, (60, 120))
    assert hits >= 6
