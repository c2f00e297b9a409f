from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mentorminer.stats import (
    DegenerateTestError,
    bonferroni,
    cohens_d,
    cohens_h,
    format_alpha,
    normal_cdf,
    normal_ppf,
    normal_sf,
    regularized_incomplete_beta,
    student_t_sf,
    student_t_two_sided_p,
    two_prop_z_test,
    welch_t_test,
)

from oracles import (
    chi_square_2x2_oracle,
    cohens_d_oracle,
    normal_ppf_oracle,
    normal_sf_oracle,
    student_t_two_sided_oracle,
    two_prop_oracle,
    welch_oracle,
)


# ---------------------------------------------------------------------------
# Distribution primitives vs the arbitrary-precision oracle
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("z", [-8.0, -3.5, -1.0, -0.1, 0.0, 0.5, 1.96, 2.5758, 6.48, 10.0])
def test_normal_sf_matches_oracle(z):
    assert normal_sf(z) == pytest.approx(float(normal_sf_oracle(z)), rel=1e-13, abs=1e-300)
    assert normal_cdf(z) == pytest.approx(1.0 - float(normal_sf_oracle(z)), abs=1e-13)


@pytest.mark.parametrize("q", [1e-9, 0.001, 0.025, 0.2, 0.5, 0.8, 0.975, 0.995, 1 - 1e-9])
def test_normal_ppf_matches_oracle(q):
    assert normal_ppf(q) == pytest.approx(float(normal_ppf_oracle(q)), rel=1e-12, abs=1e-12)


def test_normal_ppf_rejects_out_of_range():
    for q in (0.0, 1.0, -0.2, 1.7):
        with pytest.raises(ValueError):
            normal_ppf(q)


@pytest.mark.parametrize("t,df", [
    (0.0, 5.0), (1.0, 1.0), (2.5, 3.7), (-2.5, 3.7), (1.96, 1000.0),
    (25.48, 49161.0), (9.31, 1355.0), (0.3, 2.0), (12.0, 7.5),
])
def test_student_t_two_sided_matches_oracle(t, df):
    expected = float(student_t_two_sided_oracle(t, df))
    assert student_t_two_sided_p(t, df) == pytest.approx(expected, rel=1e-10, abs=1e-300)


def test_student_t_sf_tails():
    assert student_t_sf(0.0, 10.0) == pytest.approx(0.5)
    assert student_t_sf(2.0, 10.0) + student_t_sf(-2.0, 10.0) == pytest.approx(1.0)


def test_incomplete_beta_bounds():
    assert regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
    assert regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0
    with pytest.raises(ValueError):
        regularized_incomplete_beta(-1.0, 2.0, 0.5)


@given(st.floats(min_value=0.05, max_value=20.0),
       st.floats(min_value=0.5, max_value=500.0))
@settings(max_examples=60, deadline=None)
def test_p_monotone_in_statistic(t, df):
    # For a fixed df, a larger |t| can never give a larger p-value.
    p_small = student_t_two_sided_p(t, df)
    p_large = student_t_two_sided_p(t * 1.5 + 0.1, df)
    assert p_large <= p_small + 1e-15


# ---------------------------------------------------------------------------
# Welch t-test
# ---------------------------------------------------------------------------

def test_welch_identical_samples():
    result = welch_t_test([1, 2, 3, 4, 5], [1, 2, 3, 4, 5])
    assert result.statistic == pytest.approx(0.0)
    assert result.p_value == pytest.approx(1.0)
    assert result.estimate == pytest.approx(0.0)


def test_welch_derived_example_matches_oracle():
    a = [1, 2, 3, 4, 5]
    b = [2, 3, 4, 5, 6]
    t, df, p, estimate, d = welch_oracle(a, b)
    result = welch_t_test(a, b)
    assert result.statistic == pytest.approx(t, rel=1e-12)
    assert result.df == pytest.approx(df, rel=1e-12)
    assert result.p_value == pytest.approx(p, abs=1e-12)
    assert result.estimate == pytest.approx(estimate, rel=1e-12)
    assert result.effect_size == pytest.approx(d, rel=1e-12)
    assert result.effect_kind == "cohens-d"


def test_welch_antisymmetry():
    rng = random.Random(5)
    a = [rng.gauss(0, 1) for _ in range(12)]
    b = [rng.gauss(0.4, 2) for _ in range(9)]
    fwd = welch_t_test(a, b)
    rev = welch_t_test(b, a)
    assert fwd.statistic == pytest.approx(-rev.statistic)
    assert fwd.estimate == pytest.approx(-rev.estimate)
    assert fwd.p_value == pytest.approx(rev.p_value)
    assert fwd.effect_size == pytest.approx(rev.effect_size)


def test_welch_rejects_degenerate_samples():
    with pytest.raises(ValueError):
        welch_t_test([1.0], [1, 2, 3])
    with pytest.raises(DegenerateTestError):
        welch_t_test([2.0, 2.0, 2.0], [1, 2, 3])


def test_welch_one_sided_flag():
    a = [5, 6, 7, 8]
    b = [1, 2, 3, 4]
    two = welch_t_test(a, b)
    greater = welch_t_test(a, b, alternative="greater")
    assert greater.p_value == pytest.approx(two.p_value / 2)
    assert two.p_value_one_sided == pytest.approx(two.p_value / 2)
    with pytest.raises(ValueError):
        welch_t_test(a, b, alternative="bogus")


# ---------------------------------------------------------------------------
# Two-proportion z-test
# ---------------------------------------------------------------------------

def test_two_prop_equal_proportions():
    result = two_prop_z_test(10, 100, 5, 50)
    assert result.statistic == pytest.approx(0.0)
    assert result.p_value == pytest.approx(1.0)
    assert result.df is None


def test_two_prop_overall_gender_reference():
    # Published counts: mentoring/all comments by men vs by women.
    result = two_prop_z_test(27331, 95906, 390, 1036)
    assert abs(result.statistic) == pytest.approx(6.48, abs=0.01)
    assert result.estimate == pytest.approx(-0.09, abs=0.005)
    assert result.effect_size == pytest.approx(0.19, abs=0.005)
    assert result.effect_kind == "cohens-h"
    assert result.p_value < 0.001


def test_two_prop_cross_gender_reference():
    result = two_prop_z_test(1353, 26240, 295, 390)
    assert abs(result.statistic) == pytest.approx(57.35, abs=0.05)
    assert result.estimate == pytest.approx(-0.70, abs=0.005)
    assert result.effect_size == pytest.approx(1.65, abs=0.01)


def test_two_prop_antisymmetry_and_chi_square():
    fwd = two_prop_z_test(8, 40, 20, 35)
    rev = two_prop_z_test(20, 35, 8, 40)
    assert fwd.statistic == pytest.approx(-rev.statistic)
    assert fwd.estimate == pytest.approx(-rev.estimate)
    assert fwd.p_value == pytest.approx(rev.p_value)
    chi2 = chi_square_2x2_oracle(8, 40, 20, 35)
    assert fwd.statistic ** 2 == pytest.approx(chi2, rel=1e-10)


def test_two_prop_degenerate():
    with pytest.raises(DegenerateTestError):
        two_prop_z_test(0, 10, 0, 20)
    with pytest.raises(DegenerateTestError):
        two_prop_z_test(10, 10, 20, 20)
    with pytest.raises(ValueError):
        two_prop_z_test(11, 10, 5, 20)


@given(st.integers(0, 40), st.integers(1, 40), st.integers(0, 40), st.integers(1, 40))
@settings(max_examples=120, deadline=None)
def test_two_prop_z_square_equals_chi_square(x1, d1, x2, d2):
    n1, n2 = x1 + d1, x2 + d2
    total_success = x1 + x2
    if total_success == 0 or total_success == n1 + n2:
        return
    result = two_prop_z_test(x1, n1, x2, n2)
    assert result.statistic ** 2 == pytest.approx(
        chi_square_2x2_oracle(x1, n1, x2, n2), rel=1e-9)


# ---------------------------------------------------------------------------
# Effect sizes
# ---------------------------------------------------------------------------

def test_cohens_d_identical_is_zero():
    assert cohens_d([1, 2, 3], [1, 2, 3]) == pytest.approx(0.0)


def test_cohens_d_definitional_case():
    # Unit-variance samples with means 0 and 1.
    a = [-1.0, 0.0, 1.0]
    b = [0.0, 1.0, 2.0]
    assert cohens_d(a, b) == pytest.approx(1.0)


def test_cohens_d_zero_pooled_variance():
    with pytest.raises(DegenerateTestError):
        cohens_d([3.0, 3.0], [3.0, 3.0])


def test_cohens_h_successes_failures_exchange_flips_sign():
    h = cohens_h(0.3, 0.8)
    assert cohens_h(0.7, 0.2) == pytest.approx(-h)
    with pytest.raises(ValueError):
        cohens_h(1.2, 0.5)


# ---------------------------------------------------------------------------
# Bonferroni
# ---------------------------------------------------------------------------

def test_bonferroni_values():
    assert format_alpha(bonferroni(0.05, 3)) == "0.017"
    assert bonferroni(0.05, 1) == pytest.approx(0.05)
    assert bonferroni(0.01, 4) == pytest.approx(0.0025)
    with pytest.raises(ValueError):
        bonferroni(0.05, 0)


# ---------------------------------------------------------------------------
# Randomized oracle agreement (the acceptance criterion runs a larger sweep)
# ---------------------------------------------------------------------------

def test_randomized_oracle_agreement_small():
    rng = random.Random(99)
    for _ in range(20):
        na, nb = rng.randint(3, 40), rng.randint(3, 40)
        a = [rng.gauss(rng.uniform(-2, 2), rng.uniform(0.5, 3)) for _ in range(na)]
        b = [rng.gauss(rng.uniform(-2, 2), rng.uniform(0.5, 3)) for _ in range(nb)]
        t, df, p, estimate, d = welch_oracle(a, b)
        result = welch_t_test(a, b)
        assert result.statistic == pytest.approx(t, rel=1e-9)
        assert result.df == pytest.approx(df, rel=1e-9)
        assert result.p_value == pytest.approx(p, abs=1e-10)
        assert cohens_d(a, b) == pytest.approx(cohens_d_oracle(a, b), rel=1e-9)

        n1, n2 = rng.randint(2, 500), rng.randint(2, 500)
        x1, x2 = rng.randint(0, n1), rng.randint(0, n2)
        if (x1 + x2) in (0, n1 + n2):
            continue
        z, p, estimate, h = two_prop_oracle(x1, n1, x2, n2)
        result = two_prop_z_test(x1, n1, x2, n2)
        assert result.statistic == pytest.approx(z, rel=1e-9)
        assert result.p_value == pytest.approx(p, abs=1e-10)
        assert result.effect_size == pytest.approx(h, rel=1e-9, abs=1e-12)


def test_extreme_statistic_p_value_still_converges():
    # Large df with a large statistic exercises the continued fraction
    # far into the tail.
    p = student_t_two_sided_p(25.48, 49161.0)
    assert 0.0 <= p < 1e-100
    expected = float(student_t_two_sided_oracle(25.48, 49161.0))
    if expected > 0:
        assert p == pytest.approx(expected, rel=1e-8)
