"""Turn classified comments into mentor-mentee relations.

Every positively classified comment yields one mentoring instance: the
comment author mentors the PR author.  Direction comes from experience
deltas in two frames (first contribution within the project, and platform
account age) against a seniority threshold of 183 days; arity counts the
distinct mentors joined to the mentee on one PR.

All functions are pure over an immutable corpus.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

from .classifier import CommentScore
from .ingestion import Corpus

__all__ = [
    "Arity",
    "DEFAULT_THRESHOLD_DAYS",
    "Direction",
    "DirectionStats",
    "ExperienceRecord",
    "MentoringInstance",
    "arity",
    "arity_distribution",
    "build_instances",
    "classify_direction",
    "direction_distribution",
    "experience",
    "load_instances",
    "write_instances",
]

DEFAULT_THRESHOLD_DAYS = 183.0

_DAY_SECONDS = 86400.0


class Direction(str, Enum):
    TOP_DOWN = "top-down"
    PEER = "peer"
    BOTTOM_UP = "bottom-up"


class Arity(str, Enum):
    DYAD = "dyad"
    TRIAD = "triad"
    QUADRAD_PLUS = ">=quadrad"


@dataclass(frozen=True)
class ExperienceRecord:
    """First-contribution timestamps per project plus the account anchor."""

    contributor: str
    project_first_contribution: dict[str, datetime]
    account_created_at: datetime | None


@dataclass(frozen=True)
class MentoringInstance:
    """One mentoring comment: mentor, mentee, PR, and experience context.

    Deltas are signed days of (mentee first contribution - mentor first
    contribution); positive means the mentor is senior.
    """

    project: str
    pr: str
    mentee: str
    mentor: str
    comment: str
    project_direction: Direction
    global_direction: Direction
    experience_delta_project: float
    experience_delta_global: float

    def __post_init__(self):
        if self.mentor == self.mentee:
            raise ValueError("a mentoring instance requires distinct mentor and mentee")


def _delta_days(mentor_first: datetime, mentee_first: datetime) -> float:
    return (mentee_first - mentor_first).total_seconds() / _DAY_SECONDS


def _direction_from_delta(delta_days: float, threshold_days: float) -> Direction:
    if delta_days > threshold_days:
        return Direction.TOP_DOWN
    if delta_days < -threshold_days:
        return Direction.BOTTOM_UP
    return Direction.PEER


def classify_direction(mentor_first: datetime, mentee_first: datetime,
                       threshold_days: float = DEFAULT_THRESHOLD_DAYS) -> Direction:
    """Mentoring direction from two same-frame first-contribution dates.

    With delta = mentee_first - mentor_first in days: strictly above the
    threshold is top-down, strictly below its negative is bottom-up, and
    everything within the band (boundaries included) is peer.
    """
    return _direction_from_delta(_delta_days(mentor_first, mentee_first), threshold_days)


def experience(corpus: Corpus) -> dict[str, ExperienceRecord]:
    """Earliest PR-or-comment timestamp per contributor per project.

    Contributors without activity in a project are absent from that
    project's map.
    """
    firsts: dict[str, dict[str, datetime]] = {}

    def note(login: str, project: str, stamp: datetime) -> None:
        per_project = firsts.setdefault(login, {})
        current = per_project.get(project)
        if current is None or stamp < current:
            per_project[project] = stamp

    for pr in corpus.prs:
        note(pr.author, pr.project, pr.created_at)
    for comment in corpus.comments:
        note(comment.author, comment.project, comment.created_at)

    created = {c.login: c.account_created_at for c in corpus.contributors}
    return {
        login: ExperienceRecord(
            contributor=login,
            project_first_contribution=projects,
            account_created_at=created.get(login),
        )
        for login, projects in firsts.items()
    }


def build_instances(corpus: Corpus, classifications: Mapping[str, CommentScore], *,
                    threshold_days: float = DEFAULT_THRESHOLD_DAYS,
                    experience_records: Mapping[str, ExperienceRecord] | None = None,
                    ) -> tuple[MentoringInstance, ...]:
    """One mentoring instance per positively classified comment.

    ``classifications`` must cover every comment in the corpus.  A PR
    "includes implicit mentoring" exactly when it has at least one
    instance.
    """
    missing = [c.comment_id for c in corpus.comments if c.comment_id not in classifications]
    if missing:
        raise ValueError(
            f"classifications missing for {len(missing)} comment(s), e.g. {missing[0]!r}")
    if experience_records is None:
        experience_records = experience(corpus)
    author_of = {(pr.project, pr.pr_id): pr.author for pr in corpus.prs}
    instances = []
    for comment in corpus.comments:
        if not classifications[comment.comment_id].label:
            continue
        mentee = author_of[(comment.project, comment.pr)]
        mentor = comment.author
        mentor_exp = experience_records[mentor]
        mentee_exp = experience_records[mentee]
        delta_project = _delta_days(
            mentor_exp.project_first_contribution[comment.project],
            mentee_exp.project_first_contribution[comment.project],
        )
        if mentor_exp.account_created_at is None or mentee_exp.account_created_at is None:
            raise ValueError(
                f"account creation date missing for {mentor!r} or {mentee!r}; "
                "run exclusions before building instances")
        delta_global = _delta_days(mentor_exp.account_created_at,
                                   mentee_exp.account_created_at)
        instances.append(MentoringInstance(
            project=comment.project,
            pr=comment.pr,
            mentee=mentee,
            mentor=mentor,
            comment=comment.comment_id,
            project_direction=_direction_from_delta(delta_project, threshold_days),
            global_direction=_direction_from_delta(delta_global, threshold_days),
            experience_delta_project=delta_project,
            experience_delta_global=delta_global,
        ))
    return tuple(instances)


def arity(pr_key: tuple[str, str], instances: Sequence[MentoringInstance]) -> Arity:
    """Group size class for one PR: mentee plus its distinct mentors.

    A mentor with several positive comments on the PR counts once here;
    commenters who are not mentors are ignored.
    """
    project, pr_id = pr_key
    mentors = {i.mentor for i in instances if i.project == project and i.pr == pr_id}
    if not mentors:
        raise ValueError(f"PR {pr_key!r} has no mentoring instances")
    group = len(mentors) + 1
    if group == 2:
        return Arity.DYAD
    if group == 3:
        return Arity.TRIAD
    return Arity.QUADRAD_PLUS


@dataclass(frozen=True)
class DirectionStats:
    direction: Direction
    count: int
    share: float
    mean_abs_gap_days: float
    sd_gap_days: float


def direction_distribution(instances: Sequence[MentoringInstance],
                           frame: str) -> tuple[DirectionStats, ...]:
    """Per-direction counts, shares, and |gap| summary for one frame.

    ``frame`` is ``"project"`` or ``"global"``.  The standard deviation is
    the sample SD (0.0 below two observations).
    """
    if frame not in ("project", "global"):
        raise ValueError(f"frame must be 'project' or 'global', got {frame!r}")
    if not instances:
        raise ValueError("direction distribution requires at least one instance")
    gaps: dict[Direction, list[float]] = {d: [] for d in Direction}
    for inst in instances:
        if frame == "project":
            gaps[inst.project_direction].append(abs(inst.experience_delta_project))
        else:
            gaps[inst.global_direction].append(abs(inst.experience_delta_global))
    total = len(instances)
    rows = []
    for direction in (Direction.TOP_DOWN, Direction.PEER, Direction.BOTTOM_UP):
        values = gaps[direction]
        rows.append(DirectionStats(
            direction=direction,
            count=len(values),
            share=len(values) / total,
            mean_abs_gap_days=statistics.fmean(values) if values else 0.0,
            sd_gap_days=statistics.stdev(values) if len(values) > 1 else 0.0,
        ))
    return tuple(rows)


def arity_distribution(instances: Sequence[MentoringInstance],
                       ) -> tuple[tuple[Arity, int, float], ...]:
    """(arity, PR count, share) over PRs that have mentoring instances."""
    pr_keys = sorted({(i.project, i.pr) for i in instances})
    counts = {a: 0 for a in Arity}
    for key in pr_keys:
        counts[arity(key, instances)] += 1
    total = len(pr_keys)
    return tuple(
        (a, counts[a], counts[a] / total if total else math.nan)
        for a in (Arity.DYAD, Arity.TRIAD, Arity.QUADRAD_PLUS)
    )


# ---------------------------------------------------------------------------
# Instance file format
# ---------------------------------------------------------------------------

def write_instances(instances: Sequence[MentoringInstance], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as handle:
        for inst in instances:
            handle.write(json.dumps({
                "project": inst.project,
                "pr": inst.pr,
                "mentee": inst.mentee,
                "mentor": inst.mentor,
                "comment": inst.comment,
                "project_direction": inst.project_direction.value,
                "global_direction": inst.global_direction.value,
                "experience_delta_project": round(inst.experience_delta_project, 6),
                "experience_delta_global": round(inst.experience_delta_global, 6),
            }) + "\n")


def load_instances(path: str | Path) -> tuple[MentoringInstance, ...]:
    instances = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        instances.append(MentoringInstance(
            project=record["project"],
            pr=str(record["pr"]),
            mentee=record["mentee"],
            mentor=record["mentor"],
            comment=str(record["comment"]),
            project_direction=Direction(record["project_direction"]),
            global_direction=Direction(record["global_direction"]),
            experience_delta_project=float(record["experience_delta_project"]),
            experience_delta_global=float(record["experience_delta_global"]),
        ))
    return tuple(instances)
