"""PR-level prevalence and complexity analyses.

Prevalence: how many PRs contain at least one mentoring instance and how
many comment authors ever mentor.  Complexity: per-PR mentoring-comment
counts compared across a wordy/less-wordy description split (strictly
above the corpus-wide median word count) and across the reopened flag,
each via Welch's t-test at a Bonferroni-adjusted threshold.
"""

from __future__ import annotations

import re
import statistics
from dataclasses import dataclass
from typing import Sequence

from .ingestion import Corpus
from .relations import MentoringInstance
from .stats import DegenerateTestError, StatResult, welch_t_test

__all__ = [
    "ComplexityOutcome",
    "ComplexityResults",
    "PrevalenceSummary",
    "complexity_tests",
    "description_word_count",
    "prevalence",
    "wordiness_split",
]

_FENCED_CODE = re.compile(r"```.*?```", re.DOTALL)
_INLINE_CODE = re.compile(r"`[^`\n]*`")
_URL = re.compile(r"(?:https?://|www\.)\S+")
_MARKUP = re.compile(r"[#>*_~\-\[\]()|]+")


@dataclass(frozen=True)
class PrevalenceSummary:
    """How common mentoring is; all-None fields mean an empty corpus."""

    n_prs: int
    n_comments: int
    n_instances: int
    n_comment_authors: int
    n_mentors: int
    pr_fraction: float | None
    mentor_fraction: float | None
    mean_comments_per_pr: float | None
    sd_comments_per_pr: float | None

    def is_empty(self) -> bool:
        return self.n_prs == 0


@dataclass(frozen=True)
class ComplexityOutcome:
    """One split's test result, or the reason it could not run."""

    split: str
    result: StatResult | None
    error: str | None
    n_high: int
    n_low: int


@dataclass(frozen=True)
class ComplexityResults:
    wordiness: ComplexityOutcome
    reopened: ComplexityOutcome


def description_word_count(description: str) -> int:
    """Whitespace-delimited word count after stripping markup.

    Code fences, inline code, URLs, and markdown punctuation are removed
    before counting.
    """
    text = _FENCED_CODE.sub(" ", description)
    text = _INLINE_CODE.sub(" ", text)
    text = _URL.sub(" ", text)
    text = _MARKUP.sub(" ", text)
    return len(text.split())


def wordiness_split(corpus: Corpus) -> dict[tuple[str, str], bool]:
    """Per-PR wordiness: word count strictly above the corpus-wide median.

    With identical counts everywhere nothing is wordy, so the wordy group
    never exceeds half the PRs.
    """
    counts = {(pr.project, pr.pr_id): description_word_count(pr.description)
              for pr in corpus.prs}
    if not counts:
        return {}
    median = statistics.median(counts.values())
    return {key: count > median for key, count in counts.items()}


def prevalence(corpus: Corpus, instances: Sequence[MentoringInstance]) -> PrevalenceSummary:
    """Mentoring prevalence over an exclusion-filtered corpus."""
    n_prs = len(corpus.prs)
    if n_prs == 0:
        return PrevalenceSummary(0, 0, 0, 0, 0, None, None, None, None)
    per_pr = {(pr.project, pr.pr_id): 0 for pr in corpus.prs}
    for comment in corpus.comments:
        per_pr[(comment.project, comment.pr)] += 1
    prs_with_mentoring = {(i.project, i.pr) for i in instances}
    comment_authors = {c.author for c in corpus.comments}
    mentors = {i.mentor for i in instances}
    counts = list(per_pr.values())
    return PrevalenceSummary(
        n_prs=n_prs,
        n_comments=len(corpus.comments),
        n_instances=len(instances),
        n_comment_authors=len(comment_authors),
        n_mentors=len(mentors),
        pr_fraction=len(prs_with_mentoring) / n_prs,
        mentor_fraction=len(mentors) / len(comment_authors) if comment_authors else None,
        mean_comments_per_pr=statistics.fmean(counts),
        sd_comments_per_pr=statistics.stdev(counts) if len(counts) > 1 else 0.0,
    )


def _mentoring_counts(corpus: Corpus,
                      instances: Sequence[MentoringInstance]) -> dict[tuple[str, str], int]:
    counts = {(pr.project, pr.pr_id): 0 for pr in corpus.prs}
    for inst in instances:
        counts[(inst.project, inst.pr)] += 1
    return counts


def _run_split(split: str, high: list[int], low: list[int], alpha: float,
               comparisons: int) -> ComplexityOutcome:
    if not high or not low:
        return ComplexityOutcome(split, None, "a split group is empty",
                                 len(high), len(low))
    try:
        result = welch_t_test(high, low, alpha=alpha, comparisons=comparisons)
    except (ValueError, DegenerateTestError) as exc:
        return ComplexityOutcome(split, None, str(exc), len(high), len(low))
    return ComplexityOutcome(split, result, None, len(high), len(low))


def complexity_tests(corpus: Corpus, instances: Sequence[MentoringInstance], *,
                     alpha: float = 0.05, comparisons: int = 3) -> ComplexityResults:
    """Welch tests of mentoring-comment counts across both complexity splits.

    Sample A is the complex group (wordy, reopened), so a positive
    estimate means complex PRs carry more mentoring.  A failed split
    reports its error while the other still runs.
    """
    counts = _mentoring_counts(corpus, instances)
    wordy = wordiness_split(corpus)
    wordy_counts = [counts[key] for key, flag in wordy.items() if flag]
    plain_counts = [counts[key] for key, flag in wordy.items() if not flag]
    reopened_counts = [counts[(pr.project, pr.pr_id)] for pr in corpus.prs if pr.reopened]
    stable_counts = [counts[(pr.project, pr.pr_id)] for pr in corpus.prs if not pr.reopened]
    return ComplexityResults(
        wordiness=_run_split("wordiness", wordy_counts, plain_counts, alpha, comparisons),
        reopened=_run_split("reopened", reopened_counts, stable_counts, alpha, comparisons),
    )
