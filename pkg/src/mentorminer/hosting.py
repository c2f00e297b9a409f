"""Pluggable hosting-platform clients for corpus ingestion.

A hosting client exposes three fetches (PRs per project, comments per PR,
profile per login) and the loader assembles their raw records through the
same validation pipeline as file ingestion.  Two implementations ship: a
fixture-backed offline client that reads a store directory, and a REST
client with bounded parallelism and a rate-limit budget whose HTTP layer
is injectable for testing.
"""

from __future__ import annotations

import json
import os
import threading
import time
import urllib.error
import urllib.parse
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Protocol

from .ingestion import (
    COMMENTS_SUFFIX,
    CONTRIBUTORS_SUFFIX,
    PRS_SUFFIX,
    IngestError,
    LoadResult,
    assemble_corpus,
)

__all__ = [
    "FixtureHostingClient",
    "HostingClient",
    "RestHostingClient",
    "TOKEN_ENV_VAR",
    "load_corpus_via_client",
]

TOKEN_ENV_VAR = "MENTORMINER_HOSTING_TOKEN"


class HostingClient(Protocol):
    """Interface a hosting-platform adapter must provide."""

    def fetch_prs(self, project: str) -> list[dict]:
        """Raw PR records for one project."""
        ...

    def fetch_comments(self, pr: dict) -> list[dict]:
        """Raw comment records for one PR record."""
        ...

    def fetch_profile(self, login: str) -> dict | None:
        """Raw profile record, or None when the account no longer exists."""
        ...


class FixtureHostingClient:
    """Offline client serving records from a store directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        if not self.root.is_dir():
            raise IngestError(f"fixture root {self.root} is not a directory")

    def projects(self) -> list[str]:
        return sorted(p.name[: -len(PRS_SUFFIX)] for p in self.root.glob(f"*{PRS_SUFFIX}"))

    def _read(self, path: Path) -> list[dict]:
        if not path.exists():
            return []
        records = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                records.append(json.loads(line))
        return records

    def fetch_prs(self, project: str) -> list[dict]:
        records = self._read(self.root / f"{project}{PRS_SUFFIX}")
        for record in records:
            record.setdefault("project", project)
        return records

    def fetch_comments(self, pr: dict) -> list[dict]:
        project = pr["project"]
        wanted = str(pr["pr_id"])
        return [r for r in self._read(self.root / f"{project}{COMMENTS_SUFFIX}")
                if str(r.get("pr")) == wanted]

    def fetch_profile(self, login: str) -> dict | None:
        for path in self.root.glob(f"*{CONTRIBUTORS_SUFFIX}"):
            for record in self._read(path):
                if record.get("login") == login:
                    if record.get("deleted") or record.get("account_created_at") is None:
                        return None
                    return record
        return None


class _RateLimiter:
    """Enforce a minimum interval between requests across threads."""

    def __init__(self, min_interval: float):
        self.min_interval = min_interval
        self._lock = threading.Lock()
        self._next_slot = 0.0

    def wait(self) -> None:
        if self.min_interval <= 0:
            return
        with self._lock:
            now = time.monotonic()
            slot = max(now, self._next_slot)
            self._next_slot = slot + self.min_interval
        delay = slot - now
        if delay > 0:
            time.sleep(delay)


class RestHostingClient:
    """Generic REST adapter with pagination and a rate-limit budget.

    Endpoint layout (relative to ``base_url``)::

        /repos/{project}/pulls?page=N
        /repos/{project}/pulls/{pr_id}/comments?page=N
        /users/{login}

    Pages are JSON arrays; an empty page ends pagination.  A 404 on a
    profile lookup returns None (account deleted).  ``fetch_json`` is
    injectable so the pagination and rate limiting are testable offline.
    """

    def __init__(self, base_url: str, token: str | None = None, *,
                 fetch_json: Callable[[str], object] | None = None,
                 min_interval: float = 0.0, page_size: int = 100):
        self.base_url = base_url.rstrip("/")
        self.token = token if token is not None else os.environ.get(TOKEN_ENV_VAR)
        self.page_size = page_size
        self._limiter = _RateLimiter(min_interval)
        self._fetch_json = fetch_json if fetch_json is not None else self._http_get

    def _http_get(self, url: str) -> object:
        request = urllib.request.Request(url)
        if self.token:
            request.add_header("Authorization", f"Bearer {self.token}")
        request.add_header("Accept", "application/json")
        try:
            with urllib.request.urlopen(request, timeout=30) as response:
                return json.loads(response.read().decode("utf-8"))
        except urllib.error.HTTPError as exc:  # pragma: no cover - network path
            if exc.code == 404:
                return None
            raise IngestError(f"GET {url} failed with HTTP {exc.code}") from exc

    def _paginate(self, path: str) -> list[dict]:
        records: list[dict] = []
        page = 1
        while True:
            self._limiter.wait()
            query = urllib.parse.urlencode({"page": page, "per_page": self.page_size})
            payload = self._fetch_json(f"{self.base_url}{path}?{query}")
            if not payload:
                break
            if not isinstance(payload, list):
                raise IngestError(f"expected a JSON array from {path}")
            records.extend(payload)
            if len(payload) < self.page_size:
                break
            page += 1
        return records

    def fetch_prs(self, project: str) -> list[dict]:
        records = self._paginate(f"/repos/{project}/pulls")
        for record in records:
            record.setdefault("project", project)
        return records

    def fetch_comments(self, pr: dict) -> list[dict]:
        return self._paginate(f"/repos/{pr['project']}/pulls/{pr['pr_id']}/comments")

    def fetch_profile(self, login: str) -> dict | None:
        self._limiter.wait()
        payload = self._fetch_json(f"{self.base_url}/users/{urllib.parse.quote(login)}")
        if payload is None:
            return None
        if not isinstance(payload, dict):
            raise IngestError(f"expected a JSON object for profile {login!r}")
        return payload


def load_corpus_via_client(client: HostingClient, projects: list[str], *,
                           max_workers: int = 4) -> LoadResult:
    """Fetch projects through a hosting client and assemble a corpus.

    Fetches run with bounded parallelism; assembly is deterministic
    because validation sorts every collection by id.  Profiles that come
    back null yield deleted contributor records downstream.
    """
    if not projects:
        raise IngestError("no projects requested")
    project_records: dict[str, dict[str, list[tuple[str, int, dict]]]] = {
        p: {"prs": [], "comments": [], "contributors": []} for p in projects
    }

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        prs_by_project = dict(zip(projects, pool.map(client.fetch_prs, projects)))
        all_prs: list[dict] = []
        for project in projects:
            for i, record in enumerate(prs_by_project[project], start=1):
                project_records[project]["prs"].append((f"api:{project}/pulls", i, record))
                all_prs.append(record)
        for pr, comments in zip(all_prs, pool.map(client.fetch_comments, all_prs)):
            project = pr["project"]
            for i, record in enumerate(comments, start=1):
                project_records[project]["comments"].append(
                    (f"api:{project}/pulls/{pr.get('pr_id')}/comments", i, record))
        logins = sorted({str(r.get("author")) for records in project_records.values()
                         for _, _, r in records["prs"] + records["comments"]
                         if r.get("author") is not None})
        profiles = dict(zip(logins, pool.map(client.fetch_profile, logins)))

    first = projects[0]
    for i, login in enumerate(logins, start=1):
        profile = profiles[login]
        if profile is None:
            record = {"login": login, "display_name": None,
                      "account_created_at": None, "deleted": True}
        else:
            record = dict(profile)
            record.setdefault("login", login)
        project_records[first]["contributors"].append((f"api:users/{login}", i, record))

    return assemble_corpus(project_records)
