import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jointpick import closed_form as CF
from jointpick.pipeline import (MallowsAgents, PipelineConfig, RumAgents, SuccessEstimate,
                                estimate_success, estimates_from_csv, estimates_to_csv,
                                exact_success, joint_pick, joint_picks, run_trial)


def mallows(n, k, phi_a, phi_h, w=0.0):
    return PipelineConfig(n, k, MallowsAgents(phi_a, phi_h), w)


def test_worked_example_pick():
    assert joint_pick((3, 1, 2), (2, 1, 3), 2) == 1


def test_vectorised_pick_matches_scalar():
    perms = list(itertools.permutations(range(1, 5)))
    pairs = list(itertools.product(perms, perms))
    algo = np.array([a for a, _ in pairs])
    human = np.array([h for _, h in pairs])
    for k in range(1, 5):
        got = joint_picks(algo, human, k)
        assert got.tolist() == [joint_pick(a, h, k) for a, h in pairs]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.permutations(range(1, n + 1)),
                                                      st.permutations(range(1, n + 1)),
                                                      st.integers(1, n))))
def test_pick_degenerate_k(case):
    a, h, k = case
    pick = joint_pick(a, h, k)
    assert pick in a[:k]
    assert joint_pick(a, h, 1) == a[0]
    assert joint_pick(a, h, len(a)) == h[0]


def test_run_trial_degenerate_k():
    rng = np.random.default_rng(0)
    for _ in range(200):
        t = run_trial(mallows(5, 1, 0.7, 0.9), rng)
        assert t.joint_pick == t.algo_pick == t.algo_perm[0]
        t = run_trial(mallows(5, 5, 0.7, 0.9), rng)
        assert t.joint_pick == t.human_pick == t.human_perm[0]


def test_config_validation():
    with pytest.raises(ValueError):
        mallows(3, 0, 1, 1)
    with pytest.raises(ValueError):
        mallows(3, 4, 1, 1)
    with pytest.raises(ValueError):
        mallows(3, 2, 1, 1, w=-0.1)
    with pytest.raises(ValueError):
        mallows(3, 2, 0.0, 1)
    with pytest.raises(TypeError):
        exact_success(PipelineConfig(3, 2, RumAgents(0.5, 0.5)))


def test_exact_small_values():
    est = exact_success(mallows(3, 2, 1.0, 1.0))
    base = (1 + math.exp(-1)) / CF.z3(1.0)
    assert est.p_algo == pytest.approx(0.6652, abs=1e-4)
    assert est.p_algo == pytest.approx(base, abs=1e-14)
    assert est.p_human == pytest.approx(base, abs=1e-14)
    assert est.p_joint == pytest.approx(0.6929, abs=1e-4)
    assert est.p_joint > est.p_algo


@pytest.mark.parametrize("n,k,phi_a,phi_h,w", [
    (3, 2, 1.0, 1.0, 0.0), (3, 2, 0.4, 2.0, 0.0), (3, 1, 1.0, 0.3, 0.7),
    (3, 2, 1.0, 1.0, 1.0), (4, 2, 0.8, 1.3, 0.25), (4, 3, 2.0, 0.5, 0.5),
    (4, 4, 1.0, 1.0, 0.75), (5, 2, 1.0, 1.0, 0.5),
])
def test_exact_matches_brute_force(brute, n, k, phi_a, phi_h, w):
    joint, algo = brute(n, k, phi_a, phi_h, w)
    est = exact_success(mallows(n, k, phi_a, phi_h, w))
    assert est.p_joint == pytest.approx(joint, abs=1e-12)
    assert est.p_algo == pytest.approx(algo, abs=1e-12)


@pytest.mark.parametrize("phi", [0.3, 1.0, 2.5])
def test_exact_full_anchor_hurts_at_three_items(phi):
    est = exact_success(mallows(3, 2, phi, phi, 1.0))
    assert est.p_joint < est.p_algo


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_exact_endpoint_identities(n):
    for phi_a, phi_h in [(0.5, 1.5), (1.0, 1.0), (2.0, 0.3)]:
        for w in (0.0, 0.5):
            assert exact_success(mallows(n, 1, phi_a, phi_h, w)).p_joint == pytest.approx(
                exact_success(mallows(n, 1, phi_a, phi_h, w)).p_algo, abs=1e-14)
        top = exact_success(mallows(n, n, phi_a, phi_h))
        assert top.p_joint == pytest.approx(top.p_human, abs=1e-14)
        assert top.p_human == pytest.approx(top.p_human_independent, abs=1e-14)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("phi", [0.25, 0.5, 1.0, 2.0, 3.0])
def test_two_presented_beats_either_alone(n, phi):
    est = exact_success(mallows(n, 2, phi, phi))
    assert est.p_joint > est.p_algo
    assert est.p_algo == pytest.approx(est.p_human, abs=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_full_anchor_never_helps(n):
    for phi_a, phi_h in itertools.product((0.5, 1.0, 2.0), repeat=2):
        for k in range(1, n):
            est = exact_success(mallows(n, k, phi_a, phi_h, 1.0))
            if k == 1:
                assert est.p_joint == pytest.approx(est.p_algo, abs=1e-14)
            else:
                assert est.p_joint < est.p_algo


def test_monte_carlo_matches_exact():
    cfg = mallows(5, 2, 1.0, 1.0)
    mc = estimate_success(cfg, 50_000, 0)
    ex = exact_success(cfg)
    assert abs(mc.p_joint - ex.p_joint) < 3 * mc.se_joint
    assert mc.se_joint == pytest.approx(math.sqrt(mc.p_joint * (1 - mc.p_joint) / 50_000))


def test_monte_carlo_battery():
    rng = np.random.default_rng(2024)
    configs = []
    while len(configs) < 40:
        n = int(rng.integers(3, 6))
        configs.append(mallows(n, int(rng.integers(1, n + 1)), float(rng.uniform(0.2, 2.5)),
                               float(rng.uniform(0.2, 2.5)), float(rng.choice([0, 0.25, 0.5, 1]))))
    hits = 0
    for i, cfg in enumerate(configs):
        mc, ex = estimate_success(cfg, 20_000, 1000 * i), exact_success(cfg)
        hits += abs(mc.p_joint - ex.p_joint) < 4 * max(mc.se_joint, 1e-12)
    assert hits >= 0.95 * len(configs)


def test_batches_report_spread():
    est = estimate_success(mallows(4, 2, 1.0, 1.0), 5_000, 3, batches=4)
    assert est.trials == 20_000 and est.batches == 4
    assert 0 < est.batch_std_joint < 0.05
    single = [estimate_success(mallows(4, 2, 1.0, 1.0), 5_000, 3 + b).p_joint for b in range(4)]
    assert est.p_joint == pytest.approx(np.mean(single), abs=1e-15)
    assert est.batch_std_joint == pytest.approx(np.std(single, ddof=1), abs=1e-15)


@pytest.mark.parametrize("cfg", [mallows(5, 2, 0.8, 1.1, 0.5),
                                 PipelineConfig(6, 3, RumAgents(0.4, 0.6), 0.25)])
def test_estimates_are_deterministic(cfg):
    assert estimate_success(cfg, 10_000, 42, 2) == estimate_success(cfg, 10_000, 42, 2)


def test_noiseless_rum_is_perfect():
    for k in range(1, 8):
        assert estimate_success(PipelineConfig(7, k, RumAgents(0.0, 0.0)), 500, 1).p_joint == 1.0


def test_rum_custom_utilities():
    cfg = PipelineConfig(3, 2, RumAgents(0.0, 0.0, (5.0, 2.0, -1.0)))
    assert estimate_success(cfg, 100, 0).p_joint == 1.0
    with pytest.raises(ValueError):
        PipelineConfig(3, 2, RumAgents(0.1, 0.1, (1.0, 0.0)))


def test_csv_round_trip():
    ests = [exact_success(mallows(4, 2, 0.7, 1.9, 0.25)),
            estimate_success(mallows(3, 3, 1.0, 0.5), 1000, 9, 3),
            estimate_success(PipelineConfig(5, 2, RumAgents(0.3, 0.5), 0.5), 1000, 4)]
    back = estimates_from_csv(estimates_to_csv(ests))
    assert back == ests
    assert all(isinstance(b, SuccessEstimate) for b in back)
