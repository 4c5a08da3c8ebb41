import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from jointpick import mallows as M
from jointpick import perm as P

PHIS = [0.1, 0.5, 1.0, 2.0, 5.0]

# anchored pmf at n=3, phi=1, w=0.5, anchor (2, 1, 3); brute force over the six orders
ANCHORED_213 = {
    (1, 2, 3): 0.33262047788741095,
    (1, 3, 2): 0.12236423552739882,
    (2, 1, 3): 0.33262047788741095,
    (2, 3, 1): 0.12236423552739882,
    (3, 1, 2): 0.04501528658519023,
    (3, 2, 1): 0.04501528658519023,
}


def test_normalizer_examples():
    e = math.exp
    assert M.mallows_normalizer(3, 1.0) == pytest.approx(1 + 2 * e(-1) + 2 * e(-2) + e(-3), abs=1e-14)
    assert M.mallows_normalizer(3, 1.0) == pytest.approx(2.0562165171839744, abs=1e-12)
    for phi in PHIS:
        assert M.mallows_normalizer(1, phi) == 1.0


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("phi", PHIS)
def test_normalizer_product_equals_enumeration(n, phi):
    assert abs(M.mallows_normalizer(n, phi) - M.mallows_normalizer_enumerated(n, phi)) < 1e-12


def test_log_normalizer_survives_large_phi():
    # beyond exp overflow territory in the unlogged weights
    assert M.log_mallows_normalizer(8, 800.0) == pytest.approx(0.0, abs=1e-12)


def test_pmf_identity_calibration():
    assert M.mallows_pmf(M.MallowsSpec(3, 1.0), (1, 2, 3)) == pytest.approx(0.48, abs=0.02)
    assert M.mallows_pmf(M.MallowsSpec(3, 1.3), (1, 2, 3)) == pytest.approx(0.57, abs=0.02)


def test_pmf_uniform_limit():
    for n in (2, 3, 4):
        table = M.mallows_table(M.MallowsSpec(n, 1e-9))
        assert np.allclose(table.probs, 1 / math.factorial(n), atol=1e-8)


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("phi", PHIS)
def test_pmf_sums_to_one(n, phi):
    spec = M.MallowsSpec(n, phi)
    assert abs(M.mallows_table(spec).probs.sum() - 1) < 1e-12
    anchor = tuple(reversed(range(1, n + 1)))
    assert abs(M.anchored_table(spec, anchor, 0.3).probs.sum() - 1) < 1e-12


@pytest.mark.parametrize("n", [3, 4])
def test_anchored_pmf_sums_to_one_for_every_anchor(n):
    spec = M.MallowsSpec(n, 0.7)
    for a in P.enumerate_permutations(n):
        for w in (0.25, 1.0):
            assert abs(M.anchored_table(spec, a, w).probs.sum() - 1) < 1e-12


@pytest.mark.parametrize("n", [3, 4, 5])
def test_pmf_strictly_decreasing_in_distance(n):
    spec = M.MallowsSpec(n, 0.8)
    table = M.mallows_table(spec)
    by_d = {}
    for p, prob in table:
        by_d.setdefault(P.kendall_tau(spec.center, p), []).append(prob)
    ds = sorted(by_d)
    for lo, hi in zip(ds, ds[1:]):
        assert min(by_d[lo]) > max(by_d[hi])


def test_pmf_agrees_with_table():
    spec = M.MallowsSpec(4, 1.2)
    table = M.mallows_table(spec)
    for p, prob in table:
        assert M.mallows_pmf(spec, p) == pytest.approx(prob, rel=1e-12)


def test_anchored_unweighted_reduces_to_mallows():
    spec = M.MallowsSpec(4, 0.9)
    base = M.mallows_table(spec)
    for a in [(1, 2, 3, 4), (4, 3, 2, 1), (2, 4, 1, 3)]:
        assert np.allclose(M.anchored_table(spec, a, 0.0).probs, base.probs, atol=1e-15)


def test_anchored_full_weight_peaks_at_anchor():
    spec = M.MallowsSpec(4, 1.0)
    for a in P.enumerate_permutations(4):
        table = M.anchored_table(spec, a, 1.0)
        assert table.perms[int(np.argmax(table.probs))] == a


def test_anchored_frozen_table():
    spec = M.MallowsSpec(3, 1.0)
    table = M.anchored_table(spec, (2, 1, 3), 0.5)
    for p, expected in ANCHORED_213.items():
        assert table[p] == pytest.approx(expected, abs=1e-15)
        assert M.anchored_pmf(spec, (2, 1, 3), 0.5, p) == pytest.approx(expected, abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.permutations(range(1, 5)), st.permutations(range(1, 5)), st.permutations(range(1, 5)),
       st.floats(0.05, 4.0))
def test_full_weight_relabeling_invariance(anchor, p, sigma, phi):
    relabel = dict(zip(range(1, 5), sigma))
    spec = M.MallowsSpec(4, phi)
    lhs = M.anchored_pmf(spec, anchor, 1.0, p)
    rhs = M.anchored_pmf(spec, [relabel[x] for x in anchor], 1.0, [relabel[x] for x in p])
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_spec_validation():
    with pytest.raises(ValueError):
        M.MallowsSpec(3, 0.0)
    with pytest.raises(ValueError):
        M.MallowsSpec(3, -1.0)
    with pytest.raises(ValueError):
        M.anchored_pmf(M.MallowsSpec(3, 1.0), (1, 2, 3), 1.5, (1, 2, 3))
    with pytest.raises(P.UniverseError):
        M.mallows_pmf(M.MallowsSpec(3, 1.0), (1, 2))


def test_table_csv_round_trip():
    table = M.anchored_table(M.MallowsSpec(4, 0.6), (3, 1, 4, 2), 0.4)
    back = M.PmfTable.from_csv(table.to_csv())
    assert back.perms == table.perms
    assert np.array_equal(back.probs, table.probs)


# --- sampling ---------------------------------------------------------------


def _frequencies(draws, n):
    idx = P.lex_index(np.asarray(draws))
    return np.bincount(idx, minlength=math.factorial(n))


def test_sampler_concentrates_at_center():
    draws = M.sample_mallows_batch(M.MallowsSpec(3, 50.0), 10_000, np.random.default_rng(1))
    assert (draws == [1, 2, 3]).all(axis=1).mean() > 0.999


def test_sampler_uniform_limit():
    draws = M.sample_mallows_batch(M.MallowsSpec(3, 1e-9), 100_000, np.random.default_rng(2))
    freq = _frequencies(draws, 3) / len(draws)
    assert np.all(np.abs(freq - 1 / 6) < 0.02)


def test_sampler_identity_frequency():
    draws = M.sample_mallows_batch(M.MallowsSpec(3, 1.0), 100_000, np.random.default_rng(3))
    assert (draws == [1, 2, 3]).all(axis=1).mean() == pytest.approx(0.486, abs=0.01)


@pytest.mark.parametrize("n,phi", [(3, 1.0), (4, 0.5), (5, 1.3)])
def test_insertion_sampler_goodness_of_fit(n, phi):
    spec = M.MallowsSpec(n, phi)
    draws = M.sample_mallows_batch(spec, 200_000, np.random.default_rng(4))
    expected = M.mallows_table(spec).probs * len(draws)
    assert stats.chisquare(_frequencies(draws, n), expected).pvalue > 1e-3


def test_insertion_sampler_with_other_center():
    spec = M.MallowsSpec(4, 0.8, center=(3, 1, 4, 2))
    draws = M.sample_mallows_batch(spec, 100_000, np.random.default_rng(5))
    probs = np.exp(-0.8 * P.distance_matrix(np.array([spec.center]), P.permutation_array(4))[0])
    expected = probs / probs.sum() * len(draws)
    assert stats.chisquare(_frequencies(draws, 4), expected).pvalue > 1e-3


def test_anchored_sampler_matches_table():
    spec = M.MallowsSpec(3, 1.0)
    anchors = np.tile([2, 1, 3], (100_000, 1))
    draws = M.sample_anchored_batch(spec, anchors, 0.5, np.random.default_rng(6))
    counts = _frequencies(draws, 3)
    expected = np.array([ANCHORED_213[p] for p in P.enumerate_permutations(3)])
    se = np.sqrt(expected * (1 - expected) / len(draws))
    assert np.all(np.abs(counts / len(draws) - expected) < 3 * se)


def test_anchored_sampler_mixed_anchors_goodness_of_fit():
    spec = M.MallowsSpec(4, 0.7)
    rng = np.random.default_rng(7)
    anchors = M.sample_mallows_batch(spec, 200_000, rng)
    draws = M.sample_anchored_batch(spec, anchors, 0.6, rng)
    perms = P.permutation_array(4)
    tables = M.normalise(M.anchored_log_weights(spec, perms, 0.6, perms))
    expected = tables[P.lex_index(anchors)].sum(axis=0)
    assert stats.chisquare(_frequencies(draws, 4), expected).pvalue > 1e-3


def test_anchored_sampler_full_weight_returns_anchor():
    spec = M.MallowsSpec(4, 50.0)
    anchors = P.permutation_array(4)[np.random.default_rng(8).integers(0, 24, 10_000)]
    draws = M.sample_anchored_batch(spec, anchors, 1.0, np.random.default_rng(9))
    assert (draws == anchors).all(axis=1).mean() > 0.999


def test_anchored_sampler_unweighted_matches_mallows():
    spec = M.MallowsSpec(4, 0.9)
    anchors = np.tile([4, 3, 2, 1], (100_000, 1))
    draws = M.sample_anchored_batch(spec, anchors, 0.0, np.random.default_rng(10))
    expected = M.mallows_table(spec).probs * len(draws)
    assert stats.chisquare(_frequencies(draws, 4), expected).pvalue > 1e-3


def test_sampling_is_seeded():
    spec = M.MallowsSpec(5, 0.4)
    a = M.sample_mallows_batch(spec, 100, np.random.default_rng(11))
    b = M.sample_mallows_batch(spec, 100, np.random.default_rng(11))
    assert np.array_equal(a, b)
    assert M.sample_anchored(spec, (2, 1, 3, 4, 5), 0.5, np.random.default_rng(12)) == \
        M.sample_anchored(spec, (2, 1, 3, 4, 5), 0.5, np.random.default_rng(12))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 7), st.floats(0.01, 10.0), st.integers(0, 2**32 - 1))
def test_samples_are_permutations(n, phi, seed):
    draws = M.sample_mallows_batch(M.MallowsSpec(n, phi), 50, np.random.default_rng(seed))
    assert np.array_equal(np.sort(draws, axis=1), np.tile(np.arange(1, n + 1), (50, 1)))
