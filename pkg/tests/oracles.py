"""Independent reference implementations used to check the library.

Everything here is deliberately written along a different route from the
code under test: arbitrary-precision arithmetic via mpmath, exact
rationals via fractions, and naive exhaustive loops.  Keep these free of
imports from mentorminer internals other than plain data types.
"""

from __future__ import annotations

from datetime import timedelta
from fractions import Fraction

import mpmath as mp

mp.mp.dps = 60


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------

def welch_oracle(sample_a, sample_b):
    """(t, df, two-sided p, estimate, |cohens d|) at 60 significant digits."""
    a = [mp.mpf(x) for x in sample_a]
    b = [mp.mpf(x) for x in sample_b]
    na, nb = len(a), len(b)
    ma = mp.fsum(a) / na
    mb = mp.fsum(b) / nb
    va = mp.fsum((x - ma) ** 2 for x in a) / (na - 1)
    vb = mp.fsum((x - mb) ** 2 for x in b) / (nb - 1)
    sa, sb = va / na, vb / nb
    t = (ma - mb) / mp.sqrt(sa + sb)
    df = (sa + sb) ** 2 / (sa ** 2 / (na - 1) + sb ** 2 / (nb - 1))
    p = student_t_two_sided_oracle(t, df)
    pooled = mp.sqrt(((na - 1) * va + (nb - 1) * vb) / (na + nb - 2))
    d = abs(ma - mb) / pooled
    return float(t), float(df), float(p), float(ma - mb), float(d)


def student_t_two_sided_oracle(t, df):
    t = mp.mpf(t)
    df = mp.mpf(df)
    if t == 0:
        return mp.mpf(1)
    x = df / (df + t * t)
    return mp.betainc(df / 2, mp.mpf(1) / 2, 0, x, regularized=True)


def normal_sf_oracle(z):
    return mp.erfc(mp.mpf(z) / mp.sqrt(2)) / 2


def normal_ppf_oracle(q):
    return mp.sqrt(2) * mp.erfinv(2 * mp.mpf(q) - 1)


def two_prop_oracle(x1, n1, x2, n2):
    """(z, two-sided p, estimate, |cohens h|) at 60 significant digits."""
    p1 = mp.mpf(x1) / n1
    p2 = mp.mpf(x2) / n2
    pooled = mp.mpf(x1 + x2) / (n1 + n2)
    se = mp.sqrt(pooled * (1 - pooled) * (mp.mpf(1) / n1 + mp.mpf(1) / n2))
    z = (p1 - p2) / se
    p = 2 * normal_sf_oracle(abs(z))
    h = 2 * mp.asin(mp.sqrt(p1)) - 2 * mp.asin(mp.sqrt(p2))
    return float(z), float(p), float(p1 - p2), float(abs(h))


def chi_square_2x2_oracle(x1, n1, x2, n2):
    """Pearson chi-square without continuity correction; equals z^2."""
    a, b = mp.mpf(x1), mp.mpf(n1 - x1)
    c, d = mp.mpf(x2), mp.mpf(n2 - x2)
    n = a + b + c + d
    return float(n * (a * d - b * c) ** 2 /
                 ((a + b) * (c + d) * (a + c) * (b + d)))


def kappa_oracle(labels_a, labels_b):
    """Cohen's kappa in exact rational arithmetic."""
    n = len(labels_a)
    agree = Fraction(sum(1 for x, y in zip(labels_a, labels_b) if bool(x) == bool(y)), n)
    pa = Fraction(sum(map(bool, labels_a)), n)
    pb = Fraction(sum(map(bool, labels_b)), n)
    pe = pa * pb + (1 - pa) * (1 - pb)
    if pe == 1:
        return 1.0 if agree == 1 else 0.0
    return float((agree - pe) / (1 - pe))


def cochran_oracle(population, confidence, margin):
    z = normal_ppf_oracle(1 - (1 - mp.mpf(confidence)) / 2)
    n0 = z * z * mp.mpf("0.25") / mp.mpf(margin) ** 2
    n = n0 / (1 + (n0 - 1) / population)
    return int(mp.ceil(n))


def cohens_d_oracle(sample_a, sample_b):
    return welch_oracle(sample_a, sample_b)[4]


def auc_oracle(scores, truth):
    """Pairwise-count AUC with half credit for ties; None if undefined."""
    positives = [s for s, t in zip(scores, truth) if t]
    negatives = [s for s, t in zip(scores, truth) if not t]
    if not positives or not negatives:
        return None
    wins = 0.0
    for p in positives:
        for n in negatives:
            if p > n:
                wins += 1.0
            elif p == n:
                wins += 0.5
    return wins / (len(positives) * len(negatives))


# ---------------------------------------------------------------------------
# Relations
# ---------------------------------------------------------------------------

def direction_oracle(mentor_first, mentee_first, threshold_days=183.0):
    """Reference direction classification via timedelta comparisons."""
    band = timedelta(days=threshold_days)
    if mentee_first - mentor_first > band:
        return "top-down"
    if mentor_first - mentee_first > band:
        return "bottom-up"
    return "peer"


def arity_oracle(mentor_logins):
    """Group-size class from the set of mentors on one PR."""
    size = len(set(mentor_logins)) + 1
    if size < 2:
        raise ValueError("at least one mentor required")
    if size == 2:
        return "dyad"
    if size == 3:
        return "triad"
    return ">=quadrad"


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------

def exclusion_oracle(prs, comments, deleted_logins):
    """Brute-force filter: returns (surviving pr keys, surviving comment ids)."""
    keep_prs = [pr for pr in prs if pr.author not in deleted_logins]
    keys = {(pr.project, pr.pr_id) for pr in keep_prs}
    authors = {(pr.project, pr.pr_id): pr.author for pr in keep_prs}
    keep_comments = []
    for c in comments:
        if c.author in deleted_logins:
            continue
        if (c.project, c.pr) not in keys:
            continue
        if authors[(c.project, c.pr)] == c.author:
            continue
        keep_comments.append(c.comment_id)
    return keys, set(keep_comments)
