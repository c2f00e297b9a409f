"""Name-based gender inference and gendered mentoring-pair analysis.

Inference goes through a pluggable client.  Two implementations ship: an
HTTP adapter for a name-recognition service that scores names on a -1..+1
scale (mapped here to a class plus a confidence of |scale|), and a
deterministic table-backed fixture client for offline runs and tests.
Only inferences with confidence strictly above 0.90 are retained.

The upstream instrument is binary (woman/man); that limitation carries
through every downstream table and is documented in the README.
"""

from __future__ import annotations

import json
import os
import time
import urllib.parse
import urllib.request
import urllib.error
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping, Protocol, Sequence

from .ingestion import Contributor, Corpus
from .relations import MentoringInstance

__all__ = [
    "API_KEY_ENV_VAR",
    "CONFIDENCE_CUTOFF",
    "FixtureGenderClient",
    "Gender",
    "GenderCache",
    "GenderClient",
    "GenderClientError",
    "GenderInference",
    "GenderReading",
    "GenderRecord",
    "NamsorClient",
    "PairCounts",
    "exclude_ungendered_projects",
    "homophily_rate",
    "infer_genders",
    "pair_counts",
]

CONFIDENCE_CUTOFF = 0.90

API_KEY_ENV_VAR = "MENTORMINER_GENDER_API_KEY"


class Gender(str, Enum):
    WOMAN = "woman"
    MAN = "man"


class GenderClientError(RuntimeError):
    """Transient or permanent failure of the inference client."""


@dataclass(frozen=True)
class GenderReading:
    gender: Gender
    confidence: float


@dataclass(frozen=True)
class GenderRecord:
    """A retained inference: confidence is strictly above the cutoff."""

    contributor: str
    inferred: Gender
    probability: float
    source: str

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError("probability must lie in [0, 1]")


@dataclass(frozen=True)
class GenderInference:
    records: tuple[GenderRecord, ...]
    unresolved: tuple[tuple[str, str], ...]  # (login, reason)


class GenderClient(Protocol):
    source_id: str

    def resolve(self, name: str, location: str | None) -> GenderReading | None:
        """Reading for a display name, or None when the name is unknown."""
        ...


class FixtureGenderClient:
    """Deterministic client backed by a name table (for tests and offline runs).

    The table maps display name -> {"gender": "woman"|"man",
    "confidence": float}.  Lookups ignore location.
    """

    source_id = "fixture"

    def __init__(self, table: Mapping[str, Mapping] | str | Path):
        if isinstance(table, (str, Path)):
            table = json.loads(Path(table).read_text(encoding="utf-8"))
        self._table = {name: (Gender(entry["gender"]), float(entry["confidence"]))
                       for name, entry in table.items()}
        self.calls = 0

    def resolve(self, name: str, location: str | None) -> GenderReading | None:
        self.calls += 1
        entry = self._table.get(name)
        if entry is None:
            return None
        return GenderReading(gender=entry[0], confidence=entry[1])


class NamsorClient:
    """HTTP adapter for the Namsor-style full-name gender endpoint.

    The service scores names on a -1..+1 scale; the sign picks the class
    (positive = woman by this adapter's convention) and the magnitude is
    used as the confidence.  Credentials come from the environment and are
    never written to disk.
    """

    source_id = "namsor"

    def __init__(self, base_url: str = "https://v2.namsor.com/NamSorAPIv2/api2/json",
                 api_key: str | None = None, fetch_json=None):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV_VAR)
        self._fetch_json = fetch_json if fetch_json is not None else self._http_get

    def _http_get(self, url: str) -> dict:  # pragma: no cover - network path
        request = urllib.request.Request(url)
        if self.api_key:
            request.add_header("X-API-KEY", self.api_key)
        request.add_header("Accept", "application/json")
        try:
            with urllib.request.urlopen(request, timeout=30) as response:
                return json.loads(response.read().decode("utf-8"))
        except (urllib.error.URLError, ValueError) as exc:
            raise GenderClientError(f"GET {url} failed: {exc}") from exc

    def resolve(self, name: str, location: str | None) -> GenderReading | None:
        quoted = urllib.parse.quote(name)
        if location:
            url = f"{self.base_url}/genderFullGeo/{quoted}/{urllib.parse.quote(location)}"
        else:
            url = f"{self.base_url}/genderFull/{quoted}"
        payload = self._fetch_json(url)
        if not isinstance(payload, dict):
            raise GenderClientError(f"unexpected payload for {name!r}")
        scale = payload.get("genderScale")
        if scale is None:
            return None
        scale = float(scale)
        gender = Gender.WOMAN if scale > 0 else Gender.MAN
        return GenderReading(gender=gender, confidence=min(abs(scale), 1.0))


# ---------------------------------------------------------------------------
# Cache
# ---------------------------------------------------------------------------

class GenderCache:
    """Append-only inference cache keyed by (name, location).

    One JSON record per line: name, location, class (null when the client
    could not resolve the name), confidence.  Single writer, any number of
    readers.
    """

    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path is not None else None
        self._entries: dict[tuple[str, str | None], GenderReading | None] = {}
        if self.path is not None and self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                record = json.loads(line)
                key = (record["name"], record.get("location"))
                if record.get("class") is None:
                    self._entries[key] = None
                else:
                    self._entries[key] = GenderReading(
                        gender=Gender(record["class"]),
                        confidence=float(record["confidence"]))

    def get(self, name: str, location: str | None):
        return self._entries.get((name, location), _MISSING)

    def put(self, name: str, location: str | None, reading: GenderReading | None) -> None:
        self._entries[(name, location)] = reading
        if self.path is None:
            return
        record = {
            "name": name,
            "location": location,
            "class": reading.gender.value if reading else None,
            "confidence": reading.confidence if reading else None,
        }
        with self.path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


_MISSING = object()


# ---------------------------------------------------------------------------
# Inference
# ---------------------------------------------------------------------------

def infer_genders(contributors: Sequence[Contributor], client: GenderClient,
                  cache: GenderCache | None = None, *,
                  cutoff: float = CONFIDENCE_CUTOFF, max_retries: int = 3,
                  backoff: float = 0.25, sleep=time.sleep) -> GenderInference:
    """Resolve contributor genders through the client, cutoff applied.

    Contributors keep a record only when the client resolves their display
    name with confidence strictly above ``cutoff``; everyone else lands in
    the unresolved list with a reason.  Resolutions (including
    below-cutoff and unknown-name outcomes) are cached by (name,
    location), so a second run over the same contributors issues no client
    calls.  Client errors are retried with exponential backoff and never
    cached.
    """
    if cache is None:
        cache = GenderCache(None)
    records: list[GenderRecord] = []
    unresolved: list[tuple[str, str]] = []
    for contributor in sorted(contributors, key=lambda c: c.login):
        name = contributor.display_name
        if not name:
            unresolved.append((contributor.login, "no display name"))
            continue
        reading = cache.get(name, contributor.location)
        if reading is _MISSING:
            reading = _resolve_with_retry(client, name, contributor.location,
                                          max_retries, backoff, sleep)
            if isinstance(reading, str):
                unresolved.append((contributor.login, reading))
                continue
            cache.put(name, contributor.location, reading)
        if reading is None:
            unresolved.append((contributor.login, "name not resolved by client"))
        elif reading.confidence > cutoff:
            records.append(GenderRecord(
                contributor=contributor.login,
                inferred=reading.gender,
                probability=reading.confidence,
                source=client.source_id,
            ))
        else:
            unresolved.append((contributor.login,
                               f"confidence {reading.confidence:.2f} at or below cutoff"))
    return GenderInference(records=tuple(records), unresolved=tuple(unresolved))


def _resolve_with_retry(client: GenderClient, name: str, location: str | None,
                        max_retries: int, backoff: float, sleep):
    delay = backoff
    for attempt in range(max_retries):
        try:
            return client.resolve(name, location)
        except GenderClientError as exc:
            if attempt == max_retries - 1:
                return f"client failed after {max_retries} attempts: {exc}"
            sleep(delay)
            delay *= 2
    return "client failed"


# ---------------------------------------------------------------------------
# Project filtering and pair analysis
# ---------------------------------------------------------------------------

def exclude_ungendered_projects(corpus: Corpus,
                                records: Sequence[GenderRecord]) -> tuple[str, ...]:
    """Projects retained for gender analysis.

    Drops projects where no contributor passed the confidence cutoff and
    projects with no confidently gendered women.
    """
    gender_of = {r.contributor: r.inferred for r in records}
    active: dict[str, set[str]] = {p: set() for p in corpus.projects}
    for pr in corpus.prs:
        active[pr.project].add(pr.author)
    for comment in corpus.comments:
        active[comment.project].add(comment.author)
    retained = []
    for project in corpus.projects:
        genders = [gender_of[login] for login in active[project] if login in gender_of]
        if genders and Gender.WOMAN in genders:
            retained.append(project)
    return tuple(retained)


@dataclass(frozen=True)
class PairCounts:
    """Mentor-gender -> mentee-gender counts at comment level."""

    ww: int = 0
    wm: int = 0
    mw: int = 0
    mm: int = 0

    @property
    def total(self) -> int:
        return self.ww + self.wm + self.mw + self.mm


def pair_counts(instances: Sequence[MentoringInstance],
                records: Sequence[GenderRecord]) -> tuple[PairCounts, int]:
    """Count gendered mentor->mentee pairs; return (counts, dropped).

    Instances where either endpoint lacks a retained gender record are
    dropped and tallied, so counts.total + dropped equals the instance
    count.
    """
    gender_of = {r.contributor: r.inferred for r in records}
    ww = wm = mw = mm = 0
    dropped = 0
    for inst in instances:
        mentor = gender_of.get(inst.mentor)
        mentee = gender_of.get(inst.mentee)
        if mentor is None or mentee is None:
            dropped += 1
        elif mentor is Gender.WOMAN and mentee is Gender.WOMAN:
            ww += 1
        elif mentor is Gender.WOMAN:
            wm += 1
        elif mentee is Gender.WOMAN:
            mw += 1
        else:
            mm += 1
    return PairCounts(ww=ww, wm=wm, mw=mw, mm=mm), dropped


def homophily_rate(counts: PairCounts) -> float:
    """Share of same-gender pairs; NaN when there are no gendered pairs."""
    if counts.total == 0:
        return float("nan")
    return (counts.ww + counts.mm) / counts.total
