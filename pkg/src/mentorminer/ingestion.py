"""Load, validate, filter, and persist pull-request corpora.

A corpus source is a directory holding three newline-delimited JSON files
per project::

    <project>.prs.ndjson
    <project>.comments.ndjson
    <project>.contributors.ndjson

Each line is one record whose field names match the domain types below.
Records that fail schema or integrity validation are collected into a
rejection report instead of being silently dropped.  A loaded
:class:`Corpus` is immutable and safe to share across threads.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator

__all__ = [
    "Contributor",
    "Corpus",
    "CorpusStats",
    "DimensionStats",
    "IngestError",
    "LoadResult",
    "PRComment",
    "PullRequest",
    "RecordRejection",
    "apply_exclusions",
    "corpus_stats",
    "load_corpus",
    "write_store",
]

PR_STATES = ("open", "closed", "merged")

PRS_SUFFIX = ".prs.ndjson"
COMMENTS_SUFFIX = ".comments.ndjson"
CONTRIBUTORS_SUFFIX = ".contributors.ndjson"
REJECTS_FILENAME = "rejects.ndjson"
MANIFEST_FILENAME = "manifest.json"


class IngestError(RuntimeError):
    """The corpus source could not be read at all."""


@dataclass(frozen=True)
class Contributor:
    """One platform account.

    ``account_created_at`` may be None only for deleted accounts, whose
    profile payload was null or absent at collection time.
    """

    login: str
    display_name: str | None
    location: str | None
    account_created_at: datetime | None
    deleted: bool = False


@dataclass(frozen=True)
class PullRequest:
    pr_id: str
    project: str
    author: str
    description: str
    created_at: datetime
    reopened: bool
    state: str


@dataclass(frozen=True)
class PRComment:
    comment_id: str
    pr: str
    project: str
    author: str
    body: str
    created_at: datetime


@dataclass(frozen=True)
class RecordRejection:
    source: str
    line: int
    reason: str


@dataclass(frozen=True)
class Corpus:
    """Immutable snapshot of projects, PRs, comments, and contributors.

    Collections are stored sorted by id so loading the same files always
    yields an identical corpus.
    """

    projects: tuple[str, ...]
    prs: tuple[PullRequest, ...]
    comments: tuple[PRComment, ...]
    contributors: tuple[Contributor, ...]

    def pr_key(self, pr: PullRequest) -> tuple[str, str]:
        return (pr.project, pr.pr_id)

    def pr_index(self) -> dict[tuple[str, str], PullRequest]:
        return {(p.project, p.pr_id): p for p in self.prs}

    def contributor_index(self) -> dict[str, Contributor]:
        return {c.login: c for c in self.contributors}

    def comments_by_pr(self) -> dict[tuple[str, str], tuple[PRComment, ...]]:
        grouped: dict[tuple[str, str], list[PRComment]] = {}
        for c in self.comments:
            grouped.setdefault((c.project, c.pr), []).append(c)
        return {k: tuple(v) for k, v in grouped.items()}

    def is_empty(self) -> bool:
        return not self.prs and not self.comments


@dataclass(frozen=True)
class LoadResult:
    corpus: Corpus
    rejections: tuple[RecordRejection, ...]


# ---------------------------------------------------------------------------
# Timestamp handling
# ---------------------------------------------------------------------------

def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 timestamp to UTC; bare dates become midnight UTC."""
    if not isinstance(value, str) or not value:
        raise ValueError(f"expected an ISO-8601 timestamp, got {value!r}")
    text = value.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    parsed = datetime.fromisoformat(text)
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def format_timestamp(value: datetime) -> str:
    return value.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


# ---------------------------------------------------------------------------
# Record parsing
# ---------------------------------------------------------------------------

def _require_id(record: dict, key: str) -> str:
    value = record.get(key)
    if value is None or (isinstance(value, str) and not value.strip()):
        raise ValueError(f"missing required field {key!r}")
    if not isinstance(value, (str, int)):
        raise ValueError(f"field {key!r} must be a string or integer id")
    return str(value)


def _parse_contributor(record: dict) -> Contributor:
    login = _require_id(record, "login")
    display_name = record.get("display_name")
    location = record.get("location")
    raw_created = record.get("account_created_at")
    deleted = bool(record.get("deleted", False))
    created = parse_timestamp(raw_created) if raw_created is not None else None
    # A null profile payload marks an account deleted at collection time.
    if created is None and display_name is None:
        deleted = True
    if created is None and not deleted:
        raise ValueError("account_created_at is required for non-deleted contributors")
    if display_name is not None and not isinstance(display_name, str):
        raise ValueError("display_name must be a string or null")
    if location is not None and not isinstance(location, str):
        raise ValueError("location must be a string or null")
    return Contributor(login, display_name, location, created, deleted)


def _parse_pr(record: dict, project: str) -> PullRequest:
    pr_id = _require_id(record, "pr_id")
    declared = record.get("project")
    if declared is not None and str(declared) != project:
        raise ValueError(f"record declares project {declared!r} in file for {project!r}")
    author = _require_id(record, "author")
    description = record.get("description") or ""
    if not isinstance(description, str):
        raise ValueError("description must be a string or null")
    created = parse_timestamp(record.get("created_at"))
    state = record.get("state", "open")
    if state not in PR_STATES:
        raise ValueError(f"state must be one of {PR_STATES}, got {state!r}")
    return PullRequest(pr_id, project, author, description, created,
                       bool(record.get("reopened", False)), state)


def _parse_comment(record: dict, project: str) -> PRComment:
    comment_id = _require_id(record, "comment_id")
    pr = _require_id(record, "pr")
    author = _require_id(record, "author")
    body = record.get("body")
    if not isinstance(body, str) or not body.strip():
        raise ValueError("body must be a non-empty string")
    created = parse_timestamp(record.get("created_at"))
    return PRComment(comment_id, pr, project, author, body, created)


def _iter_ndjson(path: Path) -> Iterator[tuple[int, dict | None, str | None]]:
    """Yield (line_number, record, error) triples for one ndjson file."""
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                record = json.loads(text)
            except json.JSONDecodeError as exc:
                yield line_no, None, f"invalid JSON: {exc.msg}"
                continue
            if not isinstance(record, dict):
                yield line_no, None, "record must be a JSON object"
                continue
            yield line_no, record, None


# ---------------------------------------------------------------------------
# Corpus assembly
# ---------------------------------------------------------------------------

def _synthetic_deleted(login: str) -> Contributor:
    # Referenced account with no profile record: treat as deleted at
    # collection time, same as a null profile payload.
    return Contributor(login, None, None, None, deleted=True)


def assemble_corpus(
    project_records: dict[str, dict[str, list[tuple[str, int, dict]]]],
) -> LoadResult:
    """Validate raw records and build a corpus satisfying all invariants.

    ``project_records`` maps project -> kind -> list of (source, line,
    record) triples, with kind one of ``"prs"``, ``"comments"``,
    ``"contributors"``.  Shared by the file loader and the hosting-API
    loader so both enforce identical rules.
    """
    rejections: list[RecordRejection] = []
    contributors: dict[str, Contributor] = {}
    prs: dict[tuple[str, str], PullRequest] = {}
    comments: dict[str, PRComment] = {}

    def reject(source: str, line: int, reason: str) -> None:
        rejections.append(RecordRejection(source, line, reason))

    projects = tuple(sorted(project_records))

    for project in projects:
        for source, line, record in project_records[project].get("contributors", []):
            try:
                parsed = _parse_contributor(record)
            except ValueError as exc:
                reject(source, line, str(exc))
                continue
            existing = contributors.get(parsed.login)
            if existing is None:
                contributors[parsed.login] = parsed
            elif existing != parsed:
                reject(source, line, f"conflicting duplicate contributor {parsed.login!r}")

    for project in projects:
        for source, line, record in project_records[project].get("prs", []):
            try:
                parsed = _parse_pr(record, project)
            except ValueError as exc:
                reject(source, line, str(exc))
                continue
            key = (parsed.project, parsed.pr_id)
            if key in prs:
                reject(source, line, f"duplicate pr_id {parsed.pr_id!r} in project {project!r}")
                continue
            author = contributors.get(parsed.author)
            if author is None:
                author = _synthetic_deleted(parsed.author)
                contributors[parsed.author] = author
            if author.account_created_at is not None and parsed.created_at < author.account_created_at:
                reject(source, line, f"PR {parsed.pr_id!r} predates its author's account")
                continue
            prs[key] = parsed

    for project in projects:
        for source, line, record in project_records[project].get("comments", []):
            try:
                parsed = _parse_comment(record, project)
            except ValueError as exc:
                reject(source, line, str(exc))
                continue
            if parsed.comment_id in comments:
                reject(source, line, f"duplicate comment_id {parsed.comment_id!r}")
                continue
            parent = prs.get((project, parsed.pr))
            if parent is None:
                reject(source, line,
                       f"comment {parsed.comment_id!r} references missing PR {parsed.pr!r}")
                continue
            if parsed.created_at < parent.created_at:
                reject(source, line, f"comment {parsed.comment_id!r} predates its PR")
                continue
            author = contributors.get(parsed.author)
            if author is None:
                author = _synthetic_deleted(parsed.author)
                contributors[parsed.author] = author
            if author.account_created_at is not None and parsed.created_at < author.account_created_at:
                reject(source, line,
                       f"comment {parsed.comment_id!r} predates its author's account")
                continue
            comments[parsed.comment_id] = parsed

    corpus = Corpus(
        projects=projects,
        prs=tuple(sorted(prs.values(), key=lambda p: (p.project, p.pr_id))),
        comments=tuple(sorted(comments.values(), key=lambda c: (c.project, c.comment_id))),
        contributors=tuple(sorted(contributors.values(), key=lambda c: c.login)),
    )
    return LoadResult(corpus, tuple(rejections))


def load_corpus(source: str | Path) -> LoadResult:
    """Load a corpus from a directory of per-project ndjson files.

    Unreadable sources raise :class:`IngestError`; individually malformed
    records land in the rejection report.
    """
    if isinstance(source, str) and source.startswith(("http://", "https://")):
        raise IngestError(
            "endpoint sources go through a hosting client; "
            "see mentorminer.hosting.load_corpus_via_client")
    root = Path(source)
    if not root.exists():
        raise IngestError(f"source {root} does not exist")
    if not root.is_dir():
        raise IngestError(f"source {root} is not a directory")

    project_records: dict[str, dict[str, list[tuple[str, int, dict]]]] = {}
    rejections: list[RecordRejection] = []

    def read_file(path: Path, project: str, kind: str) -> None:
        bucket = project_records.setdefault(project, {}).setdefault(kind, [])
        for line_no, record, error in _iter_ndjson(path):
            if error is not None:
                rejections.append(RecordRejection(path.name, line_no, error))
            else:
                bucket.append((path.name, line_no, record))

    pr_files = sorted(root.glob(f"*{PRS_SUFFIX}"))
    for path in pr_files:
        project = path.name[: -len(PRS_SUFFIX)]
        read_file(path, project, "prs")
        comments_path = root / f"{project}{COMMENTS_SUFFIX}"
        if comments_path.exists():
            read_file(comments_path, project, "comments")
        contributors_path = root / f"{project}{CONTRIBUTORS_SUFFIX}"
        if contributors_path.exists():
            read_file(contributors_path, project, "contributors")

    result = assemble_corpus(project_records)
    return LoadResult(result.corpus, tuple(rejections) + result.rejections)


# ---------------------------------------------------------------------------
# Exclusions
# ---------------------------------------------------------------------------

def apply_exclusions(corpus: Corpus) -> Corpus:
    """Drop PR-author self-comments and all contributions by deleted accounts.

    PRs left with zero comments are kept: they still count toward
    prevalence denominators.  The operation is a pure, idempotent filter.
    """
    deleted = {c.login for c in corpus.contributors if c.deleted}
    prs = tuple(pr for pr in corpus.prs if pr.author not in deleted)
    surviving = {(pr.project, pr.pr_id) for pr in prs}
    author_of = {(pr.project, pr.pr_id): pr.author for pr in prs}
    comments = tuple(
        c for c in corpus.comments
        if (c.project, c.pr) in surviving
        and c.author not in deleted
        and c.author != author_of[(c.project, c.pr)]
    )
    contributors = tuple(c for c in corpus.contributors if not c.deleted)
    return replace(corpus, prs=prs, comments=comments, contributors=contributors)


# ---------------------------------------------------------------------------
# Corpus statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DimensionStats:
    dimension: str
    maximum: float
    minimum: float
    mean: float
    median: float


@dataclass(frozen=True)
class CorpusStats:
    """Per-project summary: one row per dimension, stats across projects."""

    rows: tuple[DimensionStats, ...]

    def is_empty(self) -> bool:
        return not self.rows


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Max/min/mean/median across projects for the summary dimensions.

    Dimensions: distinct active developers, PR count, non-author comment
    count, and project age in weeks (span from the earliest to the latest
    recorded activity).  An empty corpus yields an explicit empty summary.
    """
    if corpus.is_empty():
        return CorpusStats(rows=())
    author_of = {(pr.project, pr.pr_id): pr.author for pr in corpus.prs}
    per_project: dict[str, dict[str, float]] = {}
    activity: dict[str, list[datetime]] = {}
    developers: dict[str, set[str]] = {}
    for project in corpus.projects:
        per_project[project] = {"developers": 0.0, "pull_requests": 0.0,
                                "non_author_comments": 0.0, "project_age_weeks": 0.0}
        activity[project] = []
        developers[project] = set()
    for pr in corpus.prs:
        per_project[pr.project]["pull_requests"] += 1
        developers[pr.project].add(pr.author)
        activity[pr.project].append(pr.created_at)
    for c in corpus.comments:
        developers[c.project].add(c.author)
        activity[c.project].append(c.created_at)
        if c.author != author_of.get((c.project, c.pr)):
            per_project[c.project]["non_author_comments"] += 1
    for project, stamps in activity.items():
        per_project[project]["developers"] = float(len(developers[project]))
        if stamps:
            span = max(stamps) - min(stamps)
            per_project[project]["project_age_weeks"] = span.total_seconds() / (7 * 86400)

    rows = []
    for dimension in ("developers", "pull_requests", "non_author_comments", "project_age_weeks"):
        values = [per_project[p][dimension] for p in corpus.projects]
        rows.append(DimensionStats(
            dimension=dimension,
            maximum=max(values),
            minimum=min(values),
            mean=statistics.fmean(values),
            median=float(statistics.median(values)),
        ))
    return CorpusStats(rows=tuple(rows))


# ---------------------------------------------------------------------------
# Store persistence (single-writer)
# ---------------------------------------------------------------------------

def _contributor_record(c: Contributor) -> dict:
    return {
        "login": c.login,
        "display_name": c.display_name,
        "location": c.location,
        "account_created_at": format_timestamp(c.account_created_at)
        if c.account_created_at is not None else None,
        "deleted": c.deleted,
    }


def _pr_record(pr: PullRequest) -> dict:
    return {
        "pr_id": pr.pr_id,
        "project": pr.project,
        "author": pr.author,
        "description": pr.description,
        "created_at": format_timestamp(pr.created_at),
        "reopened": pr.reopened,
        "state": pr.state,
    }


def _comment_record(c: PRComment) -> dict:
    return {
        "comment_id": c.comment_id,
        "pr": c.pr,
        "author": c.author,
        "body": c.body,
        "created_at": format_timestamp(c.created_at),
    }


def _write_ndjson(path: Path, records: Iterable[dict]) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with tmp.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    tmp.replace(path)


def write_store(corpus: Corpus, out_dir: str | Path,
                rejections: tuple[RecordRejection, ...] = ()) -> Path:
    """Persist a corpus as a store directory (atomic per-file writes).

    The store is itself a valid load source, so a write/load round trip
    reproduces the corpus.  Callers must honor the single-writer contract.
    """
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    contributors_of: dict[str, set[str]] = {p: set() for p in corpus.projects}
    for pr in corpus.prs:
        contributors_of[pr.project].add(pr.author)
    for c in corpus.comments:
        contributors_of[c.project].add(c.author)
    # Contributors without recorded activity still belong to the corpus;
    # park them in the first project file so a write/load round trip is exact.
    if corpus.projects:
        active = set().union(*contributors_of.values()) if contributors_of else set()
        for contributor in corpus.contributors:
            if contributor.login not in active:
                contributors_of[corpus.projects[0]].add(contributor.login)
    index = corpus.contributor_index()
    for project in corpus.projects:
        _write_ndjson(root / f"{project}{PRS_SUFFIX}",
                      (_pr_record(pr) for pr in corpus.prs if pr.project == project))
        _write_ndjson(root / f"{project}{COMMENTS_SUFFIX}",
                      (_comment_record(c) for c in corpus.comments if c.project == project))
        _write_ndjson(root / f"{project}{CONTRIBUTORS_SUFFIX}",
                      (_contributor_record(index[login])
                       for login in sorted(contributors_of[project]) if login in index))
    _write_ndjson(root / REJECTS_FILENAME,
                  ({"source": r.source, "line": r.line, "reason": r.reason}
                   for r in rejections))
    manifest = {
        "projects": list(corpus.projects),
        "prs": len(corpus.prs),
        "comments": len(corpus.comments),
        "contributors": len(corpus.contributors),
        "rejections": len(rejections),
    }
    (root / MANIFEST_FILENAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return root
