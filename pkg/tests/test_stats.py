"""Unit checks of the statistical procedures against known values and the
brute-force oracle. The heavyweight oracle sweeps live in the acceptance
suite; this file keeps the fast, targeted cases."""

import math
import random

import pytest

from oracles import brute_force_mann_whitney
from dualsim.stats import (
    bonferroni_level,
    classify_ci,
    descriptive,
    histogram,
    mann_whitney,
    mean_ci,
    paired_t_ci,
    regularized_incomplete_beta,
    student_t_cdf,
    student_t_quantile,
)


# -- descriptive ---------------------------------------------------------------

def test_descriptive_known_sample():
    stats = descriptive([2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0])
    assert stats.n == 8
    assert stats.mean == pytest.approx(5.0)
    assert stats.median == pytest.approx(4.5)
    assert stats.variance == pytest.approx(32.0 / 7.0)
    assert stats.standard_deviation == pytest.approx(math.sqrt(32.0 / 7.0))


def test_descriptive_single_value_has_no_spread():
    stats = descriptive([3.5])
    assert stats.mean == 3.5
    assert stats.standard_deviation is None
    assert stats.variance is None
    with pytest.raises(ValueError):
        descriptive([])


# -- Mann-Whitney ---------------------------------------------------------------

def test_mann_whitney_two_by_two_fixture():
    result = mann_whitney([1.0, 2.0], [3.0, 4.0])
    assert result.method == "exact"
    assert result.u_statistic == 0.0
    assert result.p_value == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_mann_whitney_interleaved_fixture():
    result = mann_whitney([1.0, 3.0, 5.0], [2.0, 4.0, 6.0])
    assert result.method == "exact"
    assert result.u_statistic == 3.0
    assert result.p_value == pytest.approx(0.70, abs=1e-12)


def test_mann_whitney_exact_against_oracle_sample():
    rng = random.Random(2024)
    for _ in range(25):
        n, m = rng.randint(1, 7), rng.randint(1, 7)
        pool = rng.sample(range(1000), n + m)
        x = [v + rng.random() * 0.5 for v in pool[:n]]
        y = [v + rng.random() * 0.5 for v in pool[n:]]
        got = mann_whitney(x, y)
        want_u, want_p = brute_force_mann_whitney(x, y)
        assert got.method == "exact"
        assert got.u_statistic == pytest.approx(want_u, abs=1e-12)
        assert got.p_value == pytest.approx(want_p, abs=1e-12)


def test_mann_whitney_u_is_antisymmetric():
    x = [1.0, 3.5, 9.0, 2.2]
    y = [3.0, 8.0, 0.5]
    fwd = mann_whitney(x, y)
    rev = mann_whitney(y, x)
    assert fwd.u_statistic + rev.u_statistic == len(x) * len(y)
    assert fwd.p_value == pytest.approx(rev.p_value, abs=1e-12)


def test_mann_whitney_ties_switch_to_normal_approximation():
    result = mann_whitney([1.0, 2.0, 2.0], [2.0, 3.0])
    assert result.method == "normal_approximation"
    assert 0.0 < result.p_value <= 1.0


def test_mann_whitney_identical_samples_show_nothing():
    values = [5.0] * 6
    result = mann_whitney(values, values)
    assert result.p_value == 1.0
    assert result.u_statistic == 18.0  # n*m/2 through midranks


def test_mann_whitney_large_samples_use_normal_approximation():
    x = [float(i) for i in range(40)]
    y = [float(i) + 0.5 for i in range(40)]
    near = mann_whitney(x, y)
    assert near.method == "normal_approximation"
    assert near.p_value > 0.5
    far = mann_whitney(x, [v + 60.0 for v in y])
    assert far.p_value < 1e-6


def test_mann_whitney_rejects_empty_samples():
    with pytest.raises(ValueError):
        mann_whitney([], [1.0])


# -- Student t ------------------------------------------------------------------

def test_t_quantile_against_published_table():
    assert student_t_quantile(0.975, 3) == pytest.approx(3.182446, abs=2e-5)
    assert student_t_quantile(0.975, 1) == pytest.approx(12.7062, abs=2e-3)
    assert student_t_quantile(0.95, 10) == pytest.approx(1.8125, abs=2e-4)
    assert student_t_quantile(0.975, 99) == pytest.approx(1.9842, abs=2e-4)
    assert student_t_quantile(0.9875, 99) == pytest.approx(2.276, abs=2e-3)


def test_t_quantile_symmetry_and_median():
    assert student_t_quantile(0.5, 7) == 0.0
    assert student_t_quantile(0.1, 7) == -student_t_quantile(0.9, 7)


def test_t_quantile_inverts_the_cdf():
    for p in (0.6, 0.9, 0.999):
        for df in (1, 4, 30, 120):
            assert student_t_cdf(student_t_quantile(p, df), df) == pytest.approx(p, abs=1e-9)


def test_t_quantile_rejects_bad_arguments():
    with pytest.raises(ValueError):
        student_t_quantile(0.0, 5)
    with pytest.raises(ValueError):
        student_t_quantile(1.0, 5)
    with pytest.raises(ValueError):
        student_t_quantile(0.5, 0)


def test_incomplete_beta_endpoints_and_reflection():
    assert regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
    assert regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0
    for x in (0.1, 0.37, 0.8):
        left = regularized_incomplete_beta(2.5, 1.5, x)
        right = regularized_incomplete_beta(1.5, 2.5, 1.0 - x)
        assert left + right == pytest.approx(1.0, abs=1e-12)


# -- confidence intervals ---------------------------------------------------------

def test_mean_ci_textbook_sample():
    ci = mean_ci([2.0, 4.0, 6.0, 8.0], level=0.95)
    assert ci.mean == 5.0
    assert ci.ci_lower == pytest.approx(0.892, abs=1e-3)
    assert ci.ci_upper == pytest.approx(9.108, abs=1e-3)
    assert ci.level == 0.95
    with pytest.raises(ValueError):
        mean_ci([1.0])


def test_paired_t_ci_matches_mean_ci_on_the_differences():
    diffs = [2.0, 4.0, 6.0, 8.0]
    paired = paired_t_ci(diffs, level=0.95)
    plain = mean_ci(diffs, level=0.95)
    assert paired.ci_lower == plain.ci_lower
    assert paired.ci_upper == plain.ci_upper


def test_paired_t_ci_degenerate_samples():
    single = paired_t_ci([1.5])
    assert (single.ci_lower, single.ci_upper) == (1.5, 1.5)
    flat = paired_t_ci([2.0, 2.0, 2.0])
    assert (flat.ci_lower, flat.ci_upper) == (2.0, 2.0)
    with pytest.raises(ValueError):
        paired_t_ci([])
    with pytest.raises(ValueError):
        paired_t_ci([1.0, 2.0], level=1.0)


def test_bonferroni_level():
    assert bonferroni_level(0.05, 2) == 0.025
    assert bonferroni_level(0.05, 1) == 0.05
    with pytest.raises(ValueError):
        bonferroni_level(0.0, 2)
    with pytest.raises(ValueError):
        bonferroni_level(0.05, 0)


def test_classify_ci_verdicts():
    assert classify_ci(0.2, 1.0) == "first_greater"
    assert classify_ci(-1.0, -0.2) == "second_greater"
    assert classify_ci(-0.1, 0.1) == "no_difference"
    # a bound sitting exactly on zero still contains zero
    assert classify_ci(0.0, 1.0) == "no_difference"
    assert classify_ci(-1.0, 0.0) == "no_difference"
    with pytest.raises(ValueError):
        classify_ci(1.0, -1.0)


# -- histogram --------------------------------------------------------------------

def test_histogram_bins_and_edges():
    hist = histogram([0.0, 0.5, 1.0, 1.5, 3.2], bin_width=1.0)
    assert hist.counts == (2, 2, 0, 1)
    assert hist.n == 5
    assert hist.bin_edges()[0] == (0.0, 1.0)
    assert hist.bin_edges()[-1] == (3.0, 4.0)


def test_histogram_edge_values_go_up():
    hist = histogram([2.0], bin_width=1.0)
    assert hist.counts == (0, 0, 1)


def test_histogram_rejects_bad_input():
    with pytest.raises(ValueError):
        histogram([1.0], bin_width=0.0)
    with pytest.raises(ValueError):
        histogram([-0.5], bin_width=1.0)
    assert histogram([], bin_width=1.0).counts == ()
