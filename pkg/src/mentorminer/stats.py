"""Hypothesis tests and effect sizes shared by every analysis table.

All test functions return a uniform :class:`StatResult` carrying the test
statistic, degrees of freedom (when the test has them), two-sided and
one-sided p-values, the raw estimate, and a standardized effect size.

Tail areas for the normal and Student t distributions are computed locally
(``erfc`` for the normal law, a Lentz continued fraction for the regularized
incomplete beta behind the t law) so the numerical results do not depend on
any statistical library.  The test suite validates them against an
arbitrary-precision oracle.

Conventions
-----------
* p-values are two-sided by default; pass ``alternative`` for a one-sided
  test.  ``StatResult.p_value_one_sided`` always carries the one-sided tail
  in the observed direction so reports can show both.
* Effect sizes are reported as absolute values: Cohen's d for mean
  comparisons, Cohen's h (the arcsine-transformed proportion difference)
  for proportion comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "DegenerateTestError",
    "StatResult",
    "bonferroni",
    "cohens_d",
    "cohens_h",
    "format_alpha",
    "normal_cdf",
    "normal_ppf",
    "normal_sf",
    "regularized_incomplete_beta",
    "student_t_sf",
    "student_t_two_sided_p",
    "two_prop_z_test",
    "welch_t_test",
]

_SQRT2 = math.sqrt(2.0)

COHENS_D = "cohens-d"
COHENS_H = "cohens-h"

_ALTERNATIVES = ("two-sided", "greater", "less")


class DegenerateTestError(ValueError):
    """The requested test is undefined for the given data."""


@dataclass(frozen=True)
class StatResult:
    """Uniform result of a two-sample hypothesis test.

    Attributes
    ----------
    statistic : float
        Signed test statistic (t or z).  Swapping the two samples negates
        it; published tables usually display the magnitude.
    df : float or None
        Degrees of freedom, absent for normal-approximation tests.
    p_value : float
        p-value under the requested alternative (two-sided by default).
    p_value_one_sided : float
        One-sided tail probability in the observed direction, emitted so
        verbose reports can show both conventions.
    estimate : float
        Raw difference: mean difference for t-tests, p1 - p2 for
        proportion tests.
    effect_size : float
        Standardized effect magnitude (always >= 0).
    effect_kind : str
        ``"cohens-d"`` for mean tests, ``"cohens-h"`` for proportion tests.
    alpha_adjusted : float
        Significance threshold after Bonferroni adjustment for the number
        of simultaneous comparisons the caller declared.
    """

    statistic: float
    df: float | None
    p_value: float
    p_value_one_sided: float
    estimate: float
    effect_size: float
    effect_kind: str
    alpha_adjusted: float


# ---------------------------------------------------------------------------
# Distribution primitives
# ---------------------------------------------------------------------------

def normal_sf(z: float) -> float:
    """Upper-tail probability P(Z > z) of the standard normal law."""
    return 0.5 * math.erfc(z / _SQRT2)


def normal_cdf(z: float) -> float:
    """Lower-tail probability P(Z <= z) of the standard normal law."""
    return 0.5 * math.erfc(-z / _SQRT2)


# Coefficients of Acklam's rational approximation to the normal quantile.
_PPF_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
          1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_PPF_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
          6.680131188771972e+01, -1.328068155288572e+01)
_PPF_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
          -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_PPF_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
          3.754408661907416e+00)


def normal_ppf(q: float) -> float:
    """Quantile (inverse CDF) of the standard normal law.

    Rational approximation refined with one Halley step against the
    erfc-based CDF; accurate to roughly 1e-14 over (0, 1).  The upper
    tail reduces to the lower by symmetry (1 - q is exact there), which
    keeps the refinement step free of cancellation.
    """
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile level must lie in (0, 1), got {q!r}")
    if q > 0.5:
        return -_normal_ppf_lower(1.0 - q)
    return _normal_ppf_lower(q)


def _normal_ppf_lower(q: float) -> float:
    a, b, c, d = _PPF_A, _PPF_B, _PPF_C, _PPF_D
    if q < 0.02425:
        u = math.sqrt(-2.0 * math.log(q))
        x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) / \
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0)
    else:
        u = q - 0.5
        t = u * u
        x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) * u / \
            (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0)
    # One Halley refinement step against the accurate CDF.
    err = normal_cdf(x) - q
    u = err * math.sqrt(2.0 * math.pi) * math.exp(x * x / 2.0)
    return x - u / (1.0 + x * u / 2.0)


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Lentz's continued fraction for the incomplete beta function."""
    tiny = 1e-300
    eps = 3e-16
    max_iter = 500 + int(10.0 * math.sqrt(max(a, b) + 1.0))
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        numer = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + numer * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numer / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        numer = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + numer * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numer / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction failed to converge for a={a}, b={b}, x={x}"
    )


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("shape parameters must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    # Use the symmetry transform so the continued fraction converges fast.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, df: float) -> float:
    """Two-sided p-value P(|T| >= |t|) for a Student t variable."""
    if df <= 0.0:
        raise ValueError("degrees of freedom must be positive")
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def student_t_sf(t: float, df: float) -> float:
    """Upper-tail probability P(T > t) for a Student t variable."""
    p_two = student_t_two_sided_p(abs(t), df)
    return p_two / 2.0 if t >= 0.0 else 1.0 - p_two / 2.0


# ---------------------------------------------------------------------------
# Effect sizes
# ---------------------------------------------------------------------------

def _mean_and_variance(values: list[float]) -> tuple[float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, var


def _as_samples(sample_a, sample_b) -> tuple[list[float], list[float]]:
    a = [float(v) for v in sample_a]
    b = [float(v) for v in sample_b]
    if len(a) < 2 or len(b) < 2:
        raise ValueError("each sample needs at least two observations")
    return a, b


def cohens_d(sample_a, sample_b) -> float:
    """Cohen's d with pooled standard deviation, reported as a magnitude.

    d = |mean_a - mean_b| / s_pooled with
    s_pooled = sqrt(((n_a - 1) s_a^2 + (n_b - 1) s_b^2) / (n_a + n_b - 2)).
    """
    a, b = _as_samples(sample_a, sample_b)
    mean_a, var_a = _mean_and_variance(a)
    mean_b, var_b = _mean_and_variance(b)
    na, nb = len(a), len(b)
    pooled_var = ((na - 1) * var_a + (nb - 1) * var_b) / (na + nb - 2)
    if pooled_var <= 0.0:
        raise DegenerateTestError("pooled variance is zero; effect size undefined")
    return abs(mean_a - mean_b) / math.sqrt(pooled_var)


def cohens_h(p1: float, p2: float) -> float:
    """Signed Cohen's h: 2 asin(sqrt(p1)) - 2 asin(sqrt(p2))."""
    for p in (p1, p2):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"proportion out of range: {p!r}")
    return 2.0 * math.asin(math.sqrt(p1)) - 2.0 * math.asin(math.sqrt(p2))


# ---------------------------------------------------------------------------
# Tests
# ---------------------------------------------------------------------------

def _check_alternative(alternative: str) -> None:
    if alternative not in _ALTERNATIVES:
        raise ValueError(f"alternative must be one of {_ALTERNATIVES}, got {alternative!r}")


def welch_t_test(sample_a, sample_b, *, alpha: float = 0.05, comparisons: int = 1,
                 alternative: str = "two-sided") -> StatResult:
    """Welch's unequal-variance t-test for two independent samples.

    t = (mean_a - mean_b) / sqrt(s_a^2/n_a + s_b^2/n_b) with
    Welch-Satterthwaite degrees of freedom.  The estimate is the mean
    difference and the effect size is pooled-SD Cohen's d.

    Parameters
    ----------
    sample_a, sample_b : sequence of float
        At least two observations each, with positive variance.
    alpha, comparisons :
        Base significance level and number of simultaneous comparisons;
        ``alpha_adjusted`` on the result is ``alpha / comparisons``.
    alternative : {"two-sided", "greater", "less"}
        Tail convention for ``p_value``.
    """
    _check_alternative(alternative)
    a, b = _as_samples(sample_a, sample_b)
    mean_a, var_a = _mean_and_variance(a)
    mean_b, var_b = _mean_and_variance(b)
    na, nb = len(a), len(b)
    if var_a <= 0.0 or var_b <= 0.0:
        raise DegenerateTestError("both samples must have positive variance")
    sq_a, sq_b = var_a / na, var_b / nb
    se2 = sq_a + sq_b
    t = (mean_a - mean_b) / math.sqrt(se2)
    df = se2 * se2 / (sq_a * sq_a / (na - 1) + sq_b * sq_b / (nb - 1))
    p_two = student_t_two_sided_p(t, df)
    if alternative == "two-sided":
        p = p_two
    elif alternative == "greater":
        p = student_t_sf(t, df)
    else:
        p = 1.0 - student_t_sf(t, df)
    return StatResult(
        statistic=t,
        df=df,
        p_value=p,
        p_value_one_sided=p_two / 2.0,
        estimate=mean_a - mean_b,
        effect_size=cohens_d(a, b),
        effect_kind=COHENS_D,
        alpha_adjusted=bonferroni(alpha, comparisons),
    )


def two_prop_z_test(x1: int, n1: int, x2: int, n2: int, *, alpha: float = 0.05,
                    comparisons: int = 1, alternative: str = "two-sided") -> StatResult:
    """Pooled two-sample z-test for a difference of proportions.

    z = (p1 - p2) / sqrt(pool (1 - pool) (1/n1 + 1/n2)) with
    pool = (x1 + x2) / (n1 + n2).  The estimate is p1 - p2 and the effect
    size is |Cohen's h| (arcsine-transformed difference).  z^2 equals the
    2x2 chi-square statistic without continuity correction.
    """
    _check_alternative(alternative)
    for x, n, tag in ((x1, n1, "first"), (x2, n2, "second")):
        if n < 1:
            raise ValueError(f"{tag} group size must be at least 1")
        if not 0 <= x <= n:
            raise ValueError(f"{tag} group successes must lie in [0, n]")
    p1, p2 = x1 / n1, x2 / n2
    pooled = (x1 + x2) / (n1 + n2)
    if pooled in (0.0, 1.0):
        raise DegenerateTestError(
            "pooled proportion is 0 or 1; the z-test is degenerate"
        )
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    z = (p1 - p2) / se
    p_two = 2.0 * normal_sf(abs(z))
    if alternative == "two-sided":
        p = p_two
    elif alternative == "greater":
        p = normal_sf(z)
    else:
        p = normal_cdf(z)
    return StatResult(
        statistic=z,
        df=None,
        p_value=p,
        p_value_one_sided=p_two / 2.0,
        estimate=p1 - p2,
        effect_size=abs(cohens_h(p1, p2)),
        effect_kind=COHENS_H,
        alpha_adjusted=bonferroni(alpha, comparisons),
    )


def bonferroni(alpha: float, m: int) -> float:
    """Bonferroni-adjusted significance level alpha / m."""
    if m < 1:
        raise ValueError("number of comparisons must be at least 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    return alpha / m


def format_alpha(alpha: float) -> str:
    """Display form of a significance level, three decimals."""
    return f"{alpha:.3f}"
