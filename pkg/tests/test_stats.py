import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credlens.errors import SampleSizeError, UndefinedCorrelationError
from credlens.stats import (
    compare_groups,
    mann_whitney_u,
    mwu_exact_p,
    pearson_r,
    rankdata,
    shapiro_wilk,
)

# (W, p) from scipy.stats.shapiro 1.15.3, frozen so the suite runs without scipy
SHAPIRO_REFERENCE = {
    "evenly_spaced_1_20": (list(range(1, 21)), 0.9603751832429884, 0.5513717457916771),
    "small_irregular": ([2.1, 3.4, 1.9, 5.6, 4.4, 3.3, 2.8], 0.9401366781979513, 0.6399513746153818),
    "fibonacci": ([1, 1, 2, 3, 5, 8, 13, 21, 34, 55], 0.7835734693441215, 0.009151185766490126),
    "author_counts": ([0] * 20 + [1] * 10 + [2] * 8 + [3] * 2, 0.7848375671945892, 3.3211338390697107e-06),
    "three_points": ([1.0, 2.0, 4.0], 0.9642857142857142, 0.6368868450289689),
    "five_points": ([0.5, 1.7, 2.2, 2.9, 7.4], 0.8510630732125569, 0.19790216213210565),
}


def brute_force_mwu_p(a, b):
    """Two-sided exact p by enumerating every split of the pooled ranks."""
    n = len(a) + len(b)
    na = len(a)
    pooled = sorted(a + b)
    rank = {v: i + 1 for i, v in enumerate(pooled)}
    u_obs = sum(rank[v] for v in a) - na * (na + 1) / 2
    u_obs = min(u_obs, na * len(b) - u_obs)
    total = hits = 0
    for combo in itertools.combinations(range(1, n + 1), na):
        u = sum(combo) - na * (na + 1) / 2
        total += 1
        hits += min(u, na * len(b) - u) <= u_obs
    return min(1.0, hits / total)


# -- pearson -----------------------------------------------------------------


def test_pearson_identity_and_negation():
    x = [1.0, 2.5, 3.0, 7.0]
    assert pearson_r(x, x) == pytest.approx(1.0)
    assert pearson_r(x, [-v for v in x]) == pytest.approx(-1.0)


def test_pearson_hand_example():
    assert pearson_r([1, 2, 3], [1, 2, 2]) == pytest.approx(math.sqrt(3) / 2, abs=1e-12)


def test_pearson_zero_variance():
    with pytest.raises(UndefinedCorrelationError):
        pearson_r([1, 2, 3], [5, 5, 5])


def test_pearson_length_mismatch():
    with pytest.raises(SampleSizeError):
        pearson_r([1, 2], [1, 2, 3])


@given(st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=30), st.floats(0.1, 10), st.floats(-5, 5))
def test_pearson_affine_invariance(xs, scale, shift):
    xs = np.array(xs)
    ys = xs**2 + np.arange(len(xs))
    try:
        r = pearson_r(xs, ys)
    except UndefinedCorrelationError:
        return
    assert -1.0 <= r <= 1.0
    assert pearson_r(xs * scale + shift, ys) == pytest.approx(r, abs=1e-6)


# -- shapiro -----------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(SHAPIRO_REFERENCE))
def test_shapiro_matches_reference(name):
    sample, w, p = SHAPIRO_REFERENCE[name]
    res = shapiro_wilk(sample)
    assert res.statistic == pytest.approx(w, abs=1e-6)
    assert res.p_value == pytest.approx(p, rel=1e-4, abs=1e-9)


def test_shapiro_zero_inflated_not_normal():
    assert shapiro_wilk(SHAPIRO_REFERENCE["author_counts"][0]).p_value < 0.05


def test_shapiro_range():
    with pytest.raises(SampleSizeError):
        shapiro_wilk([1.0, 2.0])
    with pytest.raises(SampleSizeError):
        shapiro_wilk(np.arange(5001.0))


def test_shapiro_constant_sample_is_degenerate():
    res = shapiro_wilk([3.0] * 10)
    assert res.statistic is None
    assert "constant_sample" in res.notes


@settings(max_examples=50)
@given(st.lists(st.floats(-100, 100), min_size=3, max_size=60, unique=True))
def test_shapiro_w_in_unit_interval(xs):
    res = shapiro_wilk(xs)
    if res.statistic is not None:
        assert 0.0 < res.statistic <= 1.0 + 1e-12
        assert 0.0 <= res.p_value <= 1.0


# -- mann-whitney ------------------------------------------------------------


def test_rankdata_midranks():
    assert rankdata([10, 20, 20, 30]).tolist() == [1.0, 2.5, 2.5, 4.0]


def test_mwu_complete_separation():
    assert mann_whitney_u([1, 2, 3], [4, 5, 6]).statistic == 0


def test_mwu_small_exact():
    res = mann_whitney_u([1, 2], [3, 4])
    assert res.method == "exact"
    assert res.p_value == pytest.approx(1 / 3)


def test_mwu_identical_samples():
    a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]
    res = mann_whitney_u(a, list(a))
    assert res.statistic == pytest.approx(len(a) ** 2 / 2)
    assert res.p_value == pytest.approx(1.0)


def test_mwu_constant_feature_all_ties():
    res = mann_whitney_u([2.0] * 8, [2.0] * 9)
    assert res.p_value == 1.0
    assert "all_ties" in res.notes


def test_mwu_rejects_empty():
    with pytest.raises(SampleSizeError):
        mann_whitney_u([], [1, 2])


def test_mwu_exact_matches_brute_force():
    for na, nb in [(1, 4), (2, 5), (3, 3), (4, 6), (5, 5)]:
        for combo in itertools.combinations(range(na + nb), na):
            a = list(combo)
            b = [v for v in range(na + nb) if v not in combo]
            got = mann_whitney_u(a, b, method="exact").p_value
            assert got == pytest.approx(brute_force_mwu_p(a, b), abs=1e-12)


def test_mwu_asymptotic_close_when_groups_have_three_or_more():
    worst = 0.0
    for n in range(6, 11):
        for na in range(3, n - 2):
            for combo in itertools.combinations(range(n), na):
                a = list(combo)
                b = [v for v in range(n) if v not in combo]
                exact = mwu_exact_p(mann_whitney_u(a, b, "exact").statistic, na, n - na)
                approx = mann_whitney_u(a, b, "asymptotic").p_value
                worst = max(worst, abs(exact - approx))
    assert worst <= 0.05


@settings(max_examples=60)
@given(
    st.lists(st.integers(0, 20), min_size=1, max_size=15),
    st.lists(st.integers(0, 20), min_size=1, max_size=15),
)
def test_mwu_symmetric_and_bounded(a, b):
    r1 = mann_whitney_u(a, b, "asymptotic")
    r2 = mann_whitney_u(b, a, "asymptotic")
    assert r1.statistic == r2.statistic
    assert r1.p_value == pytest.approx(r2.p_value)
    assert 0.0 <= r1.p_value <= 1.0
    assert 0 <= r1.statistic <= len(a) * len(b) / 2


def test_mwu_matches_scipy_when_available():
    scipy_stats = pytest.importorskip("scipy.stats")
    rng = np.random.default_rng(0)
    a = rng.integers(0, 5, 40)
    b = rng.integers(1, 6, 35)
    ours = mann_whitney_u(a, b)
    ref = scipy_stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic")
    assert ours.p_value == pytest.approx(ref.pvalue, rel=1e-9)


# -- compare_groups ----------------------------------------------------------


def test_compare_groups_single_class():
    with pytest.raises(SampleSizeError):
        compare_groups([1, 2, 3], ["fake"] * 3)


def test_compare_groups_summary():
    comp = compare_groups([0, 0, 1, 2, 2, 3], ["fake", "fake", "fake", "true", "true", "true"], "n_authors")
    row = comp.row()
    assert row["fake_mean"] == pytest.approx(1 / 3)
    assert row["true_median"] == 2
    assert comp.mann_whitney.statistic == 0
    assert comp.to_dict()["feature"] == "n_authors"
