"""Build the labeled training corpus: sampling, labeling, and agreement.

A labeling session starts from a statistically sized random sample of
comments, collects per-annotator binary labels guided by the rulebook
(instruction / suggestion / fix-mechanism, each requiring an underlying
explanation), and measures inter-rater reliability with Cohen's kappa.

Session files are newline-delimited JSON: a single header line followed
by append-only label entries, so concurrent annotators can work on copies
and merge deterministically.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .ingestion import Corpus, PRComment, format_timestamp, parse_timestamp
from .stats import normal_ppf

__all__ = [
    "ADJUDICATOR",
    "AnnotationSession",
    "InvalidLabelError",
    "LabelRecord",
    "LabeledExample",
    "RULE_TAGS",
    "UnresolvedConflictError",
    "cohens_kappa",
    "draw_sample",
    "export_training",
    "load_labeled_examples",
    "load_session",
    "merge_labels",
    "required_sample_size",
    "save_session",
    "write_labeled_examples",
]

RULE_TAGS = ("instruction", "suggestion", "fix-mechanism")

# Reserved annotator name whose entries settle disagreements.
ADJUDICATOR = "adjudicator"


class InvalidLabelError(ValueError):
    """A label record violates the rulebook's conjunction."""


class UnresolvedConflictError(RuntimeError):
    """Export attempted while annotators still disagree."""


def _check_label_fields(label: bool, rule_tags: tuple[str, ...], has_explanation: bool) -> None:
    for tag in rule_tags:
        if tag not in RULE_TAGS:
            raise InvalidLabelError(f"unknown rule tag {tag!r}; expected one of {RULE_TAGS}")
    if label and not (has_explanation and rule_tags):
        raise InvalidLabelError(
            "a positive label requires at least one rule tag and an explanation"
        )


@dataclass(frozen=True)
class LabelRecord:
    """One annotator's decision for one comment."""

    label: bool
    rule_tags: tuple[str, ...] = ()
    has_explanation: bool = False

    def __post_init__(self):
        _check_label_fields(self.label, self.rule_tags, self.has_explanation)


@dataclass(frozen=True)
class LabeledExample:
    """A comment with its binary mentoring label and provenance."""

    comment: PRComment
    label: bool
    annotator: str
    rule_tags: tuple[str, ...] = ()
    has_explanation: bool = False

    def __post_init__(self):
        _check_label_fields(self.label, self.rule_tags, self.has_explanation)


@dataclass
class AnnotationSession:
    """An ordered sample of comment ids plus per-annotator label maps."""

    sample: tuple[str, ...]
    seed: int
    labels: dict[str, dict[str, LabelRecord]] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.sample)

    def record(self, annotator: str, comment_id: str, entry: LabelRecord) -> None:
        if comment_id not in set(self.sample):
            raise KeyError(f"comment {comment_id!r} is not part of this session's sample")
        self.labels.setdefault(annotator, {})[comment_id] = entry

    def pending_for(self, annotator: str) -> tuple[str, ...]:
        done = self.labels.get(annotator, {})
        return tuple(cid for cid in self.sample if cid not in done)


# ---------------------------------------------------------------------------
# Sample sizing and drawing
# ---------------------------------------------------------------------------

def required_sample_size(population: int, confidence: float, margin: float) -> int:
    """Sample size by Cochran's formula with finite-population correction.

    n0 = z^2 p(1-p) / e^2 with the maximally conservative p = 0.5 and z the
    two-sided normal quantile for ``confidence``; then
    n = n0 / (1 + (n0 - 1) / population), rounded up.
    """
    if population < 1:
        raise ValueError("population must be at least 1")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie in (0, 1)")
    if not 0.0 < margin < 1.0:
        raise ValueError("margin must lie in (0, 1)")
    z = normal_ppf(1.0 - (1.0 - confidence) / 2.0)
    n0 = z * z * 0.25 / (margin * margin)
    corrected = n0 / (1.0 + (n0 - 1.0) / population)
    return math.ceil(corrected)


def draw_sample(corpus: Corpus, size: int, seed: int) -> AnnotationSession:
    """Uniform sample of comments without replacement, reproducible by seed."""
    ids = [c.comment_id for c in corpus.comments]
    if size > len(ids):
        raise ValueError(f"sample size {size} exceeds corpus comment count {len(ids)}")
    if size < 0:
        raise ValueError("sample size must be non-negative")
    rng = random.Random(seed)
    return AnnotationSession(sample=tuple(rng.sample(ids, size)), seed=seed)


# ---------------------------------------------------------------------------
# Inter-rater reliability
# ---------------------------------------------------------------------------

def cohens_kappa(labels_a: Sequence[bool], labels_b: Sequence[bool]) -> float:
    """Cohen's kappa for two aligned binary label vectors.

    kappa = (po - pe) / (1 - pe), with observed agreement po and chance
    agreement pe from the annotators' marginals.  When pe = 1 (both
    annotators degenerate on the same class) the formula is 0/0; by
    convention the result is 1.0 under perfect agreement and 0.0 otherwise.
    """
    if len(labels_a) != len(labels_b):
        raise ValueError("label vectors must have equal length")
    n = len(labels_a)
    if n == 0:
        raise ValueError("label vectors must be non-empty")
    a = [bool(v) for v in labels_a]
    b = [bool(v) for v in labels_b]
    po = sum(1 for x, y in zip(a, b) if x == y) / n
    pa = sum(a) / n
    pb = sum(b) / n
    pe = pa * pb + (1.0 - pa) * (1.0 - pb)
    if pe == 1.0:
        return 1.0 if po == 1.0 else 0.0
    return (po - pe) / (1.0 - pe)


# ---------------------------------------------------------------------------
# Merging and export
# ---------------------------------------------------------------------------

def merge_labels(session: AnnotationSession) -> tuple[dict[str, LabelRecord], tuple[str, ...]]:
    """Merge annotators' labels; return (merged map, conflicting ids).

    Pure and deterministic: agreeing entries merge (rule-tag union,
    explanation flag OR-ed), disagreeing entries are listed as conflicts
    unless an adjudicator entry settles them.
    """
    merged: dict[str, LabelRecord] = {}
    conflicts: list[str] = []
    annotators = sorted(name for name in session.labels if name != ADJUDICATOR)
    adjudicated = session.labels.get(ADJUDICATOR, {})
    for comment_id in session.sample:
        if comment_id in adjudicated:
            merged[comment_id] = adjudicated[comment_id]
            continue
        entries = [session.labels[name][comment_id]
                   for name in annotators if comment_id in session.labels[name]]
        if not entries:
            continue
        labels = {entry.label for entry in entries}
        if len(labels) > 1:
            conflicts.append(comment_id)
            continue
        tags = tuple(sorted({tag for entry in entries for tag in entry.rule_tags}))
        merged[comment_id] = LabelRecord(
            label=entries[0].label,
            rule_tags=tags,
            has_explanation=any(entry.has_explanation for entry in entries),
        )
    return merged, tuple(conflicts)


def export_training(session: AnnotationSession, corpus: Corpus,
                    annotator: str = "merged") -> tuple[LabeledExample, ...]:
    """Resolve the session into labeled examples joined to corpus comments.

    Raises :class:`UnresolvedConflictError` while disagreements remain;
    settle them by adding adjudicator entries first.
    """
    merged, conflicts = merge_labels(session)
    if conflicts:
        raise UnresolvedConflictError(
            f"{len(conflicts)} unresolved disagreement(s): {', '.join(conflicts[:5])}"
            + ("..." if len(conflicts) > 5 else "")
        )
    by_id = {c.comment_id: c for c in corpus.comments}
    examples = []
    for comment_id in session.sample:
        entry = merged.get(comment_id)
        if entry is None:
            continue
        comment = by_id.get(comment_id)
        if comment is None:
            raise KeyError(f"labeled comment {comment_id!r} is missing from the corpus")
        examples.append(LabeledExample(
            comment=comment,
            label=entry.label,
            annotator=annotator,
            rule_tags=entry.rule_tags,
            has_explanation=entry.has_explanation,
        ))
    return tuple(examples)


# ---------------------------------------------------------------------------
# Session and label file formats
# ---------------------------------------------------------------------------

def save_session(session: AnnotationSession, path: str | Path) -> None:
    lines = [json.dumps({"kind": "session", "seed": session.seed,
                         "size": session.size, "sample": list(session.sample)})]
    for annotator in sorted(session.labels):
        for comment_id in session.sample:
            entry = session.labels[annotator].get(comment_id)
            if entry is None:
                continue
            lines.append(json.dumps({
                "kind": "label", "annotator": annotator, "comment_id": comment_id,
                "label": entry.label, "rule_tags": list(entry.rule_tags),
                "has_explanation": entry.has_explanation,
            }))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def append_label(path: str | Path, annotator: str, comment_id: str,
                 entry: LabelRecord) -> None:
    """Append one label entry without rewriting the session file."""
    line = json.dumps({
        "kind": "label", "annotator": annotator, "comment_id": comment_id,
        "label": entry.label, "rule_tags": list(entry.rule_tags),
        "has_explanation": entry.has_explanation,
    })
    with Path(path).open("a", encoding="utf-8") as handle:
        handle.write(line + "\n")


def load_session(path: str | Path) -> AnnotationSession:
    lines = [line for line in Path(path).read_text(encoding="utf-8").splitlines()
             if line.strip()]
    if not lines:
        raise ValueError(f"session file {path} is empty")
    header = json.loads(lines[0])
    if header.get("kind") != "session":
        raise ValueError("session file must start with a session header line")
    session = AnnotationSession(sample=tuple(header["sample"]), seed=int(header["seed"]))
    for line in lines[1:]:
        record = json.loads(line)
        if record.get("kind") != "label":
            raise ValueError(f"unexpected entry kind {record.get('kind')!r}")
        session.record(record["annotator"], record["comment_id"], LabelRecord(
            label=bool(record["label"]),
            rule_tags=tuple(record.get("rule_tags", [])),
            has_explanation=bool(record.get("has_explanation", False)),
        ))
    return session


def write_labeled_examples(examples: Sequence[LabeledExample], path: str | Path) -> None:
    """Write self-contained training records (comment fields inlined)."""
    with Path(path).open("w", encoding="utf-8") as handle:
        for ex in examples:
            handle.write(json.dumps({
                "comment_id": ex.comment.comment_id,
                "pr": ex.comment.pr,
                "project": ex.comment.project,
                "author": ex.comment.author,
                "body": ex.comment.body,
                "created_at": format_timestamp(ex.comment.created_at),
                "label": ex.label,
                "annotator": ex.annotator,
                "rule_tags": list(ex.rule_tags),
                "has_explanation": ex.has_explanation,
            }, ensure_ascii=False) + "\n")


def load_labeled_examples(path: str | Path) -> tuple[LabeledExample, ...]:
    examples = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        comment = PRComment(
            comment_id=str(record["comment_id"]),
            pr=str(record["pr"]),
            project=str(record["project"]),
            author=str(record["author"]),
            body=record["body"],
            created_at=parse_timestamp(record["created_at"]),
        )
        examples.append(LabeledExample(
            comment=comment,
            label=bool(record["label"]),
            annotator=str(record.get("annotator", "unknown")),
            rule_tags=tuple(record.get("rule_tags", [])),
            has_explanation=bool(record.get("has_explanation", False)),
        ))
    return tuple(examples)
