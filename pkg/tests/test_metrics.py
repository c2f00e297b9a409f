from __future__ import annotations

import statistics as pystats

import pytest

from mentorminer.metrics import (
    complexity_tests,
    description_word_count,
    prevalence,
    wordiness_split,
)
from mentorminer.relations import build_instances

from conftest import build_corpus, make_comment, make_pr, utc
from oracles import welch_oracle


# ---------------------------------------------------------------------------
# Wordiness
# ---------------------------------------------------------------------------

def test_empty_description_counts_zero_and_is_not_wordy():
    assert description_word_count("") == 0
    prs = [make_pr("p1", "a", "dev", utc(2020, 1, 1), description=""),
           make_pr("p2", "a", "dev", utc(2020, 1, 2), description="one two three")]
    split = wordiness_split(build_corpus(prs, []))
    assert split[("a", "p1")] is False
    assert split[("a", "p2")] is True


def test_markup_is_stripped_before_counting():
    text = "# Title\nsee `inline` and https://x.example plus ```\ncode here\n``` words"
    # survivors: Title, see, and, plus, words
    assert description_word_count(text) == 5


def test_identical_lengths_mean_nothing_is_wordy():
    prs = [make_pr(f"p{i}", "a", "dev", utc(2020, 1, 1 + i), description="same len text")
           for i in range(4)]
    split = wordiness_split(build_corpus(prs, []))
    assert not any(split.values())


def test_wordy_group_never_exceeds_half():
    import random
    rng = random.Random(8)
    for _ in range(30):
        n = rng.randint(1, 25)
        prs = [make_pr(f"p{i}", "a", "dev", utc(2020, 1, 1),
                       description="w " * rng.randint(0, 12)) for i in range(n)]
        split = wordiness_split(build_corpus(prs, []))
        assert sum(split.values()) <= -(-n // 2)


def test_median_matches_sort_based_oracle(excluded_corpus):
    counts = sorted(description_word_count(pr.description)
                    for pr in excluded_corpus.prs)
    n = len(counts)
    median = (counts[n // 2] if n % 2 else (counts[n // 2 - 1] + counts[n // 2]) / 2)
    split = wordiness_split(excluded_corpus)
    by_key = {(pr.project, pr.pr_id): description_word_count(pr.description)
              for pr in excluded_corpus.prs}
    for key, wordy in split.items():
        assert wordy == (by_key[key] > median)


# ---------------------------------------------------------------------------
# Prevalence
# ---------------------------------------------------------------------------

def test_prevalence_fraction_three_of_ten():
    prs = [make_pr(f"p{i}", "a", "author", utc(2020, 1, 1 + i)) for i in range(10)]
    comments = [make_comment(f"c{i}", f"p{i}", "a", "rev", utc(2020, 2, 1))
                for i in range(3)]
    corpus = build_corpus(prs, comments)
    from mentorminer.classifier import CommentScore
    scores = {f"c{i}": CommentScore(True, 0.9) for i in range(3)}
    instances = build_instances(corpus, scores)
    summary = prevalence(corpus, instances)
    assert summary.pr_fraction == pytest.approx(0.30)
    assert summary.n_instances == 3


def test_prevalence_empty_corpus_explicit():
    summary = prevalence(build_corpus([], []), [])
    assert summary.is_empty()
    assert summary.pr_fraction is None


def test_prevalence_matches_brute_force_tally(excluded_corpus, fixture_rf_scores):
    instances = build_instances(excluded_corpus, fixture_rf_scores)
    summary = prevalence(excluded_corpus, instances)
    with_mentoring = {(i.project, i.pr) for i in instances}
    assert summary.pr_fraction == pytest.approx(
        len(with_mentoring) / len(excluded_corpus.prs))
    authors = {c.author for c in excluded_corpus.comments}
    mentors = {i.mentor for i in instances}
    assert summary.mentor_fraction == pytest.approx(len(mentors) / len(authors))
    per_pr = {(p.project, p.pr_id): 0 for p in excluded_corpus.prs}
    for c in excluded_corpus.comments:
        per_pr[(c.project, c.pr)] += 1
    assert summary.mean_comments_per_pr == pytest.approx(pystats.fmean(per_pr.values()))
    assert summary.sd_comments_per_pr == pytest.approx(pystats.stdev(per_pr.values()))


# ---------------------------------------------------------------------------
# Complexity tests
# ---------------------------------------------------------------------------

def test_identical_groups_give_p_near_one():
    # Two groups with the same distribution of mentoring counts.
    prs = []
    comments = []
    from mentorminer.classifier import CommentScore
    scores = {}
    c = 0
    for i in range(20):
        wordy = i % 2 == 0
        desc = "long description with many words here okay" if wordy else "short"
        prs.append(make_pr(f"p{i}", "a", "author", utc(2020, 1, 1), description=desc,
                           reopened=False))
        for j in range((i // 2) % 3):  # each wordy/plain pair shares a count
            cid = f"c{c}"
            c += 1
            comments.append(make_comment(cid, f"p{i}", "a", "rev", utc(2020, 2, 1)))
            scores[cid] = CommentScore(True, 0.9)
    corpus = build_corpus(prs, comments)
    instances = build_instances(corpus, scores)
    results = complexity_tests(corpus, instances)
    assert results.wordiness.result is not None
    assert results.wordiness.result.statistic == pytest.approx(0.0)
    assert results.wordiness.result.p_value == pytest.approx(1.0)
    assert results.wordiness.result.estimate == pytest.approx(0.0)
    # no reopened PRs at all: that split errors, the other still ran
    assert results.reopened.result is None
    assert results.reopened.error


def test_fixture_reopened_prs_carry_more_mentoring(excluded_corpus, fixture_rf_scores):
    instances = build_instances(excluded_corpus, fixture_rf_scores)
    results = complexity_tests(excluded_corpus, instances)
    outcome = results.reopened
    assert outcome.result is not None
    assert outcome.result.estimate > 0  # reopened group planted heavier

    counts = {(p.project, p.pr_id): 0 for p in excluded_corpus.prs}
    for inst in instances:
        counts[(inst.project, inst.pr)] += 1
    reopened = [counts[(p.project, p.pr_id)] for p in excluded_corpus.prs if p.reopened]
    stable = [counts[(p.project, p.pr_id)] for p in excluded_corpus.prs if not p.reopened]
    t, df, p, estimate, _ = welch_oracle(reopened, stable)
    assert outcome.result.statistic == pytest.approx(t, rel=1e-9)
    assert outcome.result.df == pytest.approx(df, rel=1e-9)
    assert outcome.result.p_value == pytest.approx(p, abs=1e-10)
    assert outcome.result.estimate == pytest.approx(estimate, rel=1e-9)
    assert outcome.result.alpha_adjusted == pytest.approx(0.05 / 3)


def test_fixture_wordiness_split_oracle_match(excluded_corpus, fixture_rf_scores):
    instances = build_instances(excluded_corpus, fixture_rf_scores)
    results = complexity_tests(excluded_corpus, instances)
    outcome = results.wordiness
    assert outcome.result is not None
    split = wordiness_split(excluded_corpus)
    counts = {(p.project, p.pr_id): 0 for p in excluded_corpus.prs}
    for inst in instances:
        counts[(inst.project, inst.pr)] += 1
    wordy = [counts[key] for key, flag in split.items() if flag]
    plain = [counts[key] for key, flag in split.items() if not flag]
    t, df, p, estimate, _ = welch_oracle(wordy, plain)
    assert outcome.result.statistic == pytest.approx(t, rel=1e-9)
    assert outcome.n_high == len(wordy)
    assert outcome.n_low == len(plain)
