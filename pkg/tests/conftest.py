from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

import pytest

from mentorminer.ingestion import Contributor, Corpus, PRComment, PullRequest
from mentorminer.resources import data_path

TESTS_DATA = Path(__file__).parent / "data"


def utc(year, month, day, hour=12, minute=0):
    return datetime(year, month, day, hour, minute, tzinfo=timezone.utc)


def make_contributor(login, created=utc(2015, 1, 1), name=None, deleted=False,
                     location=None):
    return Contributor(login=login, display_name=name, location=location,
                       account_created_at=None if deleted and created is None else created,
                       deleted=deleted)


def make_pr(pr_id, project, author, created, description="", reopened=False,
            state="merged"):
    return PullRequest(pr_id=pr_id, project=project, author=author,
                       description=description, created_at=created,
                       reopened=reopened, state=state)


def make_comment(comment_id, pr_id, project, author, created, body="looks fine to me"):
    return PRComment(comment_id=comment_id, pr=pr_id, project=project,
                     author=author, body=body, created_at=created)


def build_corpus(prs, comments, contributors=None, projects=None):
    if contributors is None:
        logins = sorted({p.author for p in prs} | {c.author for c in comments})
        contributors = [make_contributor(login) for login in logins]
    if projects is None:
        projects = sorted({p.project for p in prs})
    return Corpus(
        projects=tuple(projects),
        prs=tuple(sorted(prs, key=lambda p: (p.project, p.pr_id))),
        comments=tuple(sorted(comments, key=lambda c: (c.project, c.comment_id))),
        contributors=tuple(sorted(contributors, key=lambda c: c.login)),
    )


@pytest.fixture(scope="session")
def fixture_store_path() -> Path:
    return data_path("fixture_store")


@pytest.fixture(scope="session")
def fixture_truth() -> dict[str, bool]:
    return json.loads((TESTS_DATA / "fixture_truth.json").read_text())


@pytest.fixture(scope="session")
def fixture_corpus():
    from mentorminer.ingestion import load_corpus

    result = load_corpus(data_path("fixture_store"))
    assert not result.rejections
    return result.corpus


@pytest.fixture(scope="session")
def excluded_corpus(fixture_corpus):
    from mentorminer.ingestion import apply_exclusions

    return apply_exclusions(fixture_corpus)


@pytest.fixture(scope="session")
def fixture_labels():
    from mentorminer.annotation import load_labeled_examples

    return load_labeled_examples(data_path("fixture_labels.ndjson"))


@pytest.fixture(scope="session")
def synthetic_labels():
    from mentorminer.annotation import load_labeled_examples

    return load_labeled_examples(data_path("synthetic400_labels.ndjson"))


@pytest.fixture(scope="session")
def fixture_rf_scores(excluded_corpus, fixture_labels):
    """One shared RF train+classify run over the fixture corpus."""
    from mentorminer.classifier import classify_corpus, train

    model = train("rf", fixture_labels, seed=7)
    return classify_corpus(model, excluded_corpus)
