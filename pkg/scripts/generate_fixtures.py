#!/usr/bin/env python3
"""Regenerate the bundled fixture data.

Writes, deterministically from fixed seeds:

* ``src/mentorminer/data/fixture_store/``      - 50-PR, 4-project demo corpus
* ``src/mentorminer/data/fixture_labels.ndjson`` - training labels for it
* ``src/mentorminer/data/fixture_names.json``  - gender table for the fixture client
* ``src/mentorminer/data/fixture_config.json`` - demo pipeline config
* ``src/mentorminer/data/synthetic400_store/`` - separable 400-comment corpus
* ``src/mentorminer/data/synthetic400_labels.ndjson`` - its labels
* ``tests/data/fixture_truth.json``            - planted class per fixture comment

Run from the repository root:  python scripts/generate_fixtures.py
"""

from __future__ import annotations

import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "src" / "mentorminer" / "data"
TESTS_DATA = ROOT / "tests" / "data"

RNG = random.Random(20240601)


def utc(year, month, day, hour=12, minute=0):
    return datetime(year, month, day, hour, minute, tzinfo=timezone.utc)


def stamp(dt: datetime) -> str:
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


# ---------------------------------------------------------------------------
# Cast: login -> (display name, location, account created, gender, confidence)
# Gender None means the name table will not know the name.
# ---------------------------------------------------------------------------

CAST = {
    "arund":  ("Arun Devarajan", "Chennai, India", utc(2013, 5, 2), "man", 0.97),
    "borisk": ("Boris Kovac", "Prague, Czechia", utc(2014, 7, 19), "man", 0.96),
    "clarar": ("Clara Reyes", "Madrid, Spain", utc(2014, 2, 11), "woman", 0.98),
    "miguel": ("Miguel Ortega", "Mexico City, Mexico", utc(2016, 3, 8), "man", 0.95),
    "weiz":   ("Wei Zhang", "Shanghai, China", utc(2019, 4, 25), "woman", 0.93),
    "ingrid": ("Ingrid Svensson", "Stockholm, Sweden", utc(2017, 8, 14), "woman", 0.97),
    "tomn":   ("Tom Novak", "Vienna, Austria", utc(2021, 11, 30), "man", 0.94),
    "ninap":  ("Nina Petrova", "Sofia, Bulgaria", utc(2015, 9, 21), "woman", 0.96),
    "rahulg": ("Rahul Gupta", "Pune, India", utc(2022, 1, 15), "man", 0.95),
    "sofiab": ("Sofia Bianchi", "Milan, Italy", utc(2015, 6, 30), "woman", 0.98),
    "peterh": ("Peter Hansen", "Copenhagen, Denmark", utc(2013, 10, 10), "man", 0.97),
    "liamf":  ("Liam Fitzgerald", "Dublin, Ireland", utc(2021, 7, 7), "man", 0.93),
    "marcod": ("Marco De Luca", "Turin, Italy", utc(2016, 12, 1), "man", 0.96),
    "jakubw": ("Jakub Wozniak", "Warsaw, Poland", utc(2018, 5, 5), "man", 0.95),
    # Below or at the confidence cutoff, unnamed, or unknown to the table.
    "jo":     ("Jo Winter", "Portland, USA", utc(2019, 1, 1), "woman", 0.62),
    "sam":    ("Sam Okafor", "Lagos, Nigeria", utc(2017, 2, 2), "man", 0.90),
    "anon42": (None, None, utc(2020, 10, 10), None, None),
    "pat":    ("Pat Morgan", "Cardiff, Wales", utc(2020, 3, 3), "woman", 0.55),
    "kit":    ("Kit Walker", "Auckland, New Zealand", utc(2020, 6, 6), "man", 0.70),
}

DELETED_EXPLICIT = "ghost1"   # contributor record present, deleted flag set
DELETED_ABSENT = "ghost2"     # referenced but never in a contributors file

# First-contribution anchor per (project, login); the anchor PR or comment
# below is generated at exactly this time.
FIRSTS = {
    "orion": {
        "arund": utc(2019, 1, 10), "borisk": utc(2019, 2, 15), "clarar": utc(2019, 3, 5),
        "miguel": utc(2020, 9, 12), "weiz": utc(2020, 9, 20), "ingrid": utc(2020, 10, 5),
        "tomn": utc(2022, 6, 10), "ninap": utc(2022, 6, 15), "rahulg": utc(2022, 7, 1),
        "jo": utc(2021, 4, 1), "sam": utc(2021, 5, 1), "anon42": utc(2021, 6, 6),
    },
    "maple": {
        "peterh": utc(2019, 4, 2), "sofiab": utc(2019, 5, 20), "arund": utc(2020, 2, 14),
        "weiz": utc(2021, 8, 9), "liamf": utc(2022, 3, 25), "ninap": utc(2022, 8, 1),
    },
    "quartz": {
        "marcod": utc(2019, 9, 1), "jakubw": utc(2020, 1, 15), "miguel": utc(2021, 4, 10),
    },
    "basalt": {
        "anon42": utc(2021, 1, 5), "pat": utc(2021, 2, 10), "kit": utc(2021, 3, 15),
    },
}

# ---------------------------------------------------------------------------
# Comment text templates
# ---------------------------------------------------------------------------

NOUNS = ["config loader", "parser", "retry queue", "schema", "test harness",
         "linter rule", "cache layer", "release script", "index builder",
         "merge handler", "logger", "thread pool", "feature flag", "migration"]
VERBS = ["split", "rename", "extract", "pin", "guard", "inline", "batch"]
FAILS = ["deadlock on startup", "drop events silently", "leak file handles",
         "double-count retries", "race with the writer"]
TOOLS = ["the formatter", "the schema checker", "the integration suite",
         "the memory profiler"]

POSITIVE_TEMPLATES = [
    ("suggestion", "i would {verb} the {noun} here, because the {fail_subj} can {fail} when both paths are hot"),
    ("instruction", "please run {tool} before pushing, because it catches {noun} regressions early"),
    ("suggestion", "consider {verb}ing the {noun}, because the {noun2} depends on its ordering"),
    ("fix-mechanism", "to fix this, {verb} the {noun} and retry, because the {noun2} caches the old value"),
    ("instruction", "you should {verb} the {noun} first, because otherwise the {noun2} will {fail}"),
    ("suggestion", "maybe {verb} the {noun}, because the {noun2} reads it during shutdown and that explains the flake"),
]

NEGATIVE_TEMPLATES = [
    "lgtm",
    "thanks for the quick turnaround!",
    "+1, merging now",
    "rebased onto main",
    "ci is green, nice work",
    "done",
    "updated the branch with the latest changes",
    "see https://builds.example.org/job/{n} for the full log",
    "```\nmake check\n```",
    "taking a look later today",
    "screenshots attached",
    "works on my machine now",
]


def positive_body(rng) -> tuple[str, str]:
    tag, template = rng.choice(POSITIVE_TEMPLATES)
    return tag, template.format(
        verb=rng.choice(VERBS), noun=rng.choice(NOUNS), noun2=rng.choice(NOUNS),
        fail=rng.choice(FAILS), fail_subj=rng.choice(NOUNS), tool=rng.choice(TOOLS),
    )


def negative_body(rng) -> str:
    template = rng.choice(NEGATIVE_TEMPLATES)
    return template.format(n=rng.randrange(100, 999))


def wordy_description(rng) -> str:
    parts = ["This change reworks the " + rng.choice(NOUNS) + " end to end."]
    for _ in range(rng.randrange(4, 8)):
        parts.append("It also touches the %s so the %s stays consistent under load." %
                     (rng.choice(NOUNS), rng.choice(NOUNS)))
    return " ".join(parts)


def terse_description(rng) -> str:
    return rng.choice(["fix typo", "bump version", "update docs",
                       "small cleanup", "", "add missing test"])


# ---------------------------------------------------------------------------
# Fixture corpus assembly
# ---------------------------------------------------------------------------

def build_fixture():
    prs: dict[str, list[dict]] = {p: [] for p in FIRSTS}
    comments: dict[str, list[dict]] = {p: [] for p in FIRSTS}
    truth: dict[str, bool] = {}
    positive_meta: dict[str, str] = {}  # comment_id -> rule tag
    counter = {"c": 0}

    def add_pr(project, pr_id, author, created, *, wordy=False, reopened=False,
               state="merged"):
        prs[project].append({
            "pr_id": pr_id, "project": project, "author": author,
            "description": wordy_description(RNG) if wordy else terse_description(RNG),
            "created_at": stamp(created), "reopened": reopened, "state": state,
        })

    def add_comment(project, pr_id, author, created, *, positive=False):
        counter["c"] += 1
        comment_id = f"{project}-c{counter['c']:04d}"
        if positive:
            tag, body = positive_body(RNG)
            positive_meta[comment_id] = tag
        else:
            body = negative_body(RNG)
        comments[project].append({
            "comment_id": comment_id, "pr": pr_id, "author": author,
            "body": body, "created_at": stamp(created),
        })
        truth[comment_id] = positive
        return comment_id

    def after(project, pr_created, author, days):
        base = max(pr_created, FIRSTS[project].get(author, pr_created))
        return base + timedelta(days=days, minutes=RNG.randrange(1, 600))

    # --- orion: 20 PRs -----------------------------------------------------
    P = "orion"
    author_prs = [
        ("o1", "arund", FIRSTS[P]["arund"], dict(wordy=True)),
        ("o2", "arund", utc(2019, 6, 3), {}),
        ("o3", "arund", utc(2020, 3, 18), dict(wordy=True)),
        ("o4", "arund", utc(2021, 5, 6), {}),
        ("o5", "borisk", FIRSTS[P]["borisk"], dict(reopened=True, wordy=True)),
        ("o6", "borisk", utc(2020, 8, 22), {}),
        ("o7", "clarar", FIRSTS[P]["clarar"], {}),
        ("o8", "clarar", utc(2021, 9, 9), dict(wordy=True)),
        ("o9", "miguel", FIRSTS[P]["miguel"], {}),
        ("o10", "weiz", FIRSTS[P]["weiz"], dict(wordy=True)),
        ("o11", "ingrid", FIRSTS[P]["ingrid"], {}),
        ("o12", "tomn", FIRSTS[P]["tomn"], dict(reopened=True, wordy=True)),
        ("o13", "tomn", utc(2022, 9, 14), {}),
        ("o14", "tomn", utc(2023, 1, 20), dict(state="open")),
        ("o15", "ninap", FIRSTS[P]["ninap"], dict(reopened=True, wordy=True)),
        ("o16", "ninap", utc(2022, 11, 2), {}),
        ("o17", "rahulg", FIRSTS[P]["rahulg"], dict(wordy=True)),
        ("o18", "rahulg", utc(2023, 2, 8), dict(state="closed")),
        ("o19", DELETED_EXPLICIT, utc(2021, 3, 3), {}),
        ("o20", "anon42", FIRSTS[P]["anon42"], {}),
    ]
    for pr_id, author, created, kw in author_prs:
        add_pr(P, pr_id, author, created, **kw)
    pr_created = {pr_id: created for pr_id, _, created, _ in author_prs}

    # Anchor comments so each contributor's first orion activity matches FIRSTS.
    add_comment(P, "o1", "jo", FIRSTS[P]["jo"])
    add_comment(P, "o1", "sam", FIRSTS[P]["sam"])

    # Planted mentoring, project frame:
    # top-down (senior mentor -> junior mentee)
    add_comment(P, "o12", "arund", after(P, pr_created["o12"], "arund", 1), positive=True)   # mm
    add_comment(P, "o15", "arund", after(P, pr_created["o15"], "arund", 2), positive=True)   # mw
    add_comment(P, "o17", "clarar", after(P, pr_created["o17"], "clarar", 1), positive=True) # wm
    add_comment(P, "o15", "clarar", after(P, pr_created["o15"], "clarar", 3), positive=True) # ww
    add_comment(P, "o13", "borisk", after(P, pr_created["o13"], "borisk", 2), positive=True) # mm
    add_comment(P, "o16", "miguel", after(P, pr_created["o16"], "miguel", 1), positive=True) # mw
    add_comment(P, "o12", "borisk", after(P, pr_created["o12"], "borisk", 4), positive=True) # mm
    # peer (within cohort)
    add_comment(P, "o2", "borisk", after(P, pr_created["o2"], "borisk", 1), positive=True)   # mm
    add_comment(P, "o6", "clarar", after(P, pr_created["o6"], "clarar", 2), positive=True)   # wm
    add_comment(P, "o7", "arund", after(P, pr_created["o7"], "arund", 1), positive=True)     # mw
    add_comment(P, "o10", "ingrid", after(P, pr_created["o10"], "ingrid", 1), positive=True) # ww
    add_comment(P, "o9", "weiz", after(P, pr_created["o9"], "weiz", 2), positive=True)       # wm
    # bottom-up (junior mentor -> senior mentee)
    add_comment(P, "o4", "tomn", after(P, pr_created["o4"], "tomn", 1), positive=True)       # mm
    add_comment(P, "o6", "ninap", after(P, pr_created["o6"], "ninap", 2), positive=True)     # wm
    add_comment(P, "o8", "rahulg", after(P, pr_created["o8"], "rahulg", 1), positive=True)   # mw
    add_comment(P, "o10", "ninap", after(P, pr_created["o10"], "ninap", 3), positive=True)   # ww
    add_comment(P, "o3", "rahulg", after(P, pr_created["o3"], "rahulg", 4), positive=True)   # mm
    # extra mentoring on reopened PR o5 (mentor clarar: peer; tomn: bottom-up)
    add_comment(P, "o5", "clarar", after(P, pr_created["o5"], "clarar", 1), positive=True)
    add_comment(P, "o5", "tomn", after(P, pr_created["o5"], "tomn", 2), positive=True)
    # a 3rd mentor on o12 so its group is >=quadrad
    add_comment(P, "o12", "clarar", after(P, pr_created["o12"], "clarar", 5), positive=True)
    # mentee without a confident gender record (dropped from pair counts)
    add_comment(P, "o20", "arund", after(P, pr_created["o20"], "arund", 1), positive=True)

    # background negatives (by gendered, low-confidence, and unnamable folks)
    background = ["arund", "borisk", "clarar", "miguel", "weiz", "ingrid",
                  "tomn", "ninap", "rahulg", "jo", "sam", "anon42"]
    for pr_id, author, created, _ in author_prs:
        for _ in range(RNG.randrange(2, 6)):
            commenter = RNG.choice(background)
            if commenter == author:
                continue
            add_comment(P, pr_id, commenter, after(P, created, commenter,
                                                   RNG.randrange(5, 120)))
    # self-comments (removed by exclusions)
    for pr_id in ("o1", "o5", "o12", "o15"):
        author = next(a for i, a, _, _ in author_prs if i == pr_id)
        add_comment(P, pr_id, author, after(P, pr_created[pr_id], author, 6))
    # deleted contributors' comments (removed by exclusions)
    add_comment(P, "o2", DELETED_EXPLICIT, after(P, pr_created["o2"], "arund", 8))
    add_comment(P, "o3", DELETED_ABSENT, after(P, pr_created["o3"], "arund", 9))
    add_comment(P, "o19", "arund", after(P, pr_created["o19"], "arund", 2))

    # --- maple: 18 PRs ------------------------------------------------------
    P = "maple"
    maple_prs = [
        ("m1", "peterh", FIRSTS[P]["peterh"], dict(wordy=True)),
        ("m2", "peterh", utc(2019, 11, 11), {}),
        ("m3", "peterh", utc(2020, 7, 7), dict(reopened=True, wordy=True)),
        ("m4", "peterh", utc(2021, 2, 2), {}),
        ("m5", "peterh", utc(2022, 5, 15), {}),
        ("m6", "sofiab", FIRSTS[P]["sofiab"], {}),
        ("m7", "sofiab", utc(2020, 4, 4), dict(wordy=True)),
        ("m8", "sofiab", utc(2021, 10, 10), {}),
        ("m9", "sofiab", utc(2022, 12, 1), dict(state="open")),
        ("m10", "arund", FIRSTS[P]["arund"], {}),
        ("m11", "arund", utc(2021, 1, 21), dict(wordy=True)),
        ("m12", "arund", utc(2022, 2, 22), {}),
        ("m13", "weiz", FIRSTS[P]["weiz"], {}),
        ("m14", "weiz", utc(2022, 4, 18), {}),
        ("m15", "liamf", FIRSTS[P]["liamf"], dict(reopened=True, wordy=True)),
        ("m16", "liamf", utc(2022, 10, 5), {}),
        ("m17", "liamf", utc(2023, 1, 12), dict(state="closed")),
        ("m18", "ninap", FIRSTS[P]["ninap"], {}),
    ]
    for pr_id, author, created, kw in maple_prs:
        add_pr(P, pr_id, author, created, **kw)
    pr_created = {pr_id: created for pr_id, _, created, _ in maple_prs}

    add_comment(P, "m15", "peterh", after(P, pr_created["m15"], "peterh", 1), positive=True)  # td mm
    add_comment(P, "m15", "sofiab", after(P, pr_created["m15"], "sofiab", 2), positive=True)  # td wm
    add_comment(P, "m18", "sofiab", after(P, pr_created["m18"], "sofiab", 1), positive=True)  # td ww
    add_comment(P, "m3", "liamf", after(P, pr_created["m3"], "liamf", 2), positive=True)      # bu mm
    add_comment(P, "m10", "weiz", after(P, pr_created["m10"], "weiz", 1), positive=True)      # bu wm
    add_comment(P, "m6", "arund", after(P, pr_created["m6"], "arund", 3), positive=True)      # bu mw
    add_comment(P, "m6", "peterh", after(P, pr_created["m6"], "peterh", 1), positive=True)    # peer mm
    add_comment(P, "m16", "ninap", after(P, pr_created["m16"], "ninap", 2), positive=True)    # peer wm
    add_comment(P, "m3", "sofiab", after(P, pr_created["m3"], "sofiab", 4), positive=True)    # reopened extra

    maple_background = ["peterh", "sofiab", "arund", "weiz", "liamf", "ninap"]
    for pr_id, author, created, _ in maple_prs:
        for _ in range(RNG.randrange(2, 6)):
            commenter = RNG.choice(maple_background)
            if commenter == author:
                continue
            add_comment(P, pr_id, commenter, after(P, created, commenter,
                                                   RNG.randrange(5, 150)))
    for pr_id in ("m3", "m15"):
        author = next(a for i, a, _, _ in maple_prs if i == pr_id)
        add_comment(P, pr_id, author, after(P, pr_created[pr_id], author, 7))

    # --- quartz: 7 PRs, confidently gendered men only ------------------------
    P = "quartz"
    quartz_prs = [
        ("q1", "marcod", FIRSTS[P]["marcod"], dict(wordy=True)),
        ("q2", "marcod", utc(2020, 6, 20), {}),
        ("q3", "marcod", utc(2021, 12, 12), {}),
        ("q4", "jakubw", FIRSTS[P]["jakubw"], {}),
        ("q5", "jakubw", utc(2021, 9, 17), dict(reopened=True, wordy=True)),
        ("q6", "miguel", FIRSTS[P]["miguel"], {}),
        ("q7", "miguel", utc(2022, 8, 24), {}),
    ]
    for pr_id, author, created, kw in quartz_prs:
        add_pr(P, pr_id, author, created, **kw)
    pr_created = {pr_id: created for pr_id, _, created, _ in quartz_prs}
    add_comment(P, "q6", "marcod", after(P, pr_created["q6"], "marcod", 1), positive=True)  # td mm
    add_comment(P, "q2", "jakubw", after(P, pr_created["q2"], "jakubw", 2), positive=True)  # peer mm
    add_comment(P, "q5", "marcod", after(P, pr_created["q5"], "marcod", 1), positive=True)  # reopened
    for pr_id, author, created, _ in quartz_prs:
        for _ in range(RNG.randrange(1, 3)):
            commenter = RNG.choice(["marcod", "jakubw", "miguel"])
            if commenter == author:
                continue
            add_comment(P, pr_id, commenter, after(P, created, commenter,
                                                   RNG.randrange(5, 100)))

    # --- basalt: 5 PRs, nobody passes the confidence cutoff ------------------
    P = "basalt"
    basalt_prs = [
        ("b1", "anon42", FIRSTS[P]["anon42"], {}),
        ("b2", "anon42", utc(2021, 7, 14), {}),
        ("b3", "pat", FIRSTS[P]["pat"], dict(wordy=True)),
        ("b4", "pat", utc(2021, 11, 23), {}),
        ("b5", "kit", FIRSTS[P]["kit"], {}),
    ]
    for pr_id, author, created, kw in basalt_prs:
        add_pr(P, pr_id, author, created, **kw)
    pr_created = {pr_id: created for pr_id, _, created, _ in basalt_prs}
    add_comment(P, "b5", "pat", after(P, pr_created["b5"], "pat", 2), positive=True)
    for pr_id, author, created, _ in basalt_prs:
        for _ in range(RNG.randrange(1, 3)):
            commenter = RNG.choice(["anon42", "pat", "kit"])
            if commenter == author:
                continue
            add_comment(P, pr_id, commenter, after(P, created, commenter,
                                                   RNG.randrange(5, 90)))

    return prs, comments, truth, positive_meta


def contributors_records():
    records = {p: [] for p in FIRSTS}
    # Assign each contributor to the projects where they are active.
    active = {p: set(FIRSTS[p]) for p in FIRSTS}
    for project, logins in active.items():
        for login in sorted(logins):
            name, location, created, _, _ = CAST[login]
            records[project].append({
                "login": login,
                "display_name": name,
                "location": location,
                "account_created_at": stamp(created),
                "deleted": False,
            })
    # ghost1: explicit deleted record in orion; ghost2 stays absent everywhere.
    records["orion"].append({
        "login": DELETED_EXPLICIT,
        "display_name": None,
        "location": None,
        "account_created_at": None,
        "deleted": True,
    })
    return records


def write_store(root: Path, prs, comments, contributors):
    root.mkdir(parents=True, exist_ok=True)
    for project in sorted(prs):
        with (root / f"{project}.prs.ndjson").open("w", encoding="utf-8") as fh:
            for record in prs[project]:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
        with (root / f"{project}.comments.ndjson").open("w", encoding="utf-8") as fh:
            for record in comments[project]:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
        with (root / f"{project}.contributors.ndjson").open("w", encoding="utf-8") as fh:
            for record in contributors.get(project, []):
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def write_labels(path: Path, prs, comments, truth, positive_meta, fraction=0.70):
    """Label a deterministic subset of comments, excluding self-comments
    and deleted authors (mirrors what annotators would have seen)."""
    author_of = {}
    for project, records in prs.items():
        for record in records:
            author_of[(project, record["pr_id"])] = record["author"]
    eligible = []
    for project, records in comments.items():
        for record in records:
            if record["author"] in (DELETED_EXPLICIT, DELETED_ABSENT):
                continue
            if author_of[(project, record["pr"])] == record["author"]:
                continue
            eligible.append((project, record))
    rng = random.Random(777)
    chosen = rng.sample(eligible, int(len(eligible) * fraction))
    chosen.sort(key=lambda item: item[1]["comment_id"])
    with path.open("w", encoding="utf-8") as fh:
        for project, record in chosen:
            label = truth[record["comment_id"]]
            tag = positive_meta.get(record["comment_id"])
            fh.write(json.dumps({
                "comment_id": record["comment_id"],
                "pr": record["pr"],
                "project": project,
                "author": record["author"],
                "body": record["body"],
                "created_at": record["created_at"],
                "label": label,
                "annotator": "merged",
                "rule_tags": [tag] if label else [],
                "has_explanation": label,
            }, ensure_ascii=False) + "\n")
    return len(chosen)


def write_names(path: Path):
    table = {}
    for login, (name, _, _, gender, confidence) in CAST.items():
        if name is None or gender is None:
            continue
        table[name] = {"gender": gender, "confidence": confidence}
    path.write_text(json.dumps(table, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def write_config(path: Path):
    config = {
        "store": "pkg:fixture_store",
        "labels": "pkg:fixture_labels.ndjson",
        "gender_client": "fixture",
        "gender_names": "pkg:fixture_names.json",
        "gender_cache": None,
        "families": ["rf", "svm", "nb", "dt", "knn"],
        "family": "rf",
        "folds": 10,
        "seed_sample": 7,
        "seed_train": 7,
        "alpha": 0.05,
        "comparisons": 3,
        "threshold_days": 183.0,
        "score_threshold": 0.5,
    }
    path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Synthetic separable 400-comment corpus
# ---------------------------------------------------------------------------

def build_synthetic():
    rng = random.Random(424242)
    project = "synth"
    authors = [f"dev{i:02d}" for i in range(12)]
    prs = []
    comments = []
    labels = []
    base = utc(2021, 3, 1)
    for i in range(80):
        author = authors[i % len(authors)]
        created = base + timedelta(days=i * 7)
        prs.append({
            "pr_id": f"s{i + 1}", "project": project, "author": author,
            "description": terse_description(rng), "created_at": stamp(created),
            "reopened": False, "state": "merged",
        })
    for i in range(400):
        pr = prs[i % 80]
        commenter = authors[(authors.index(pr["author"]) + 1 + (i % 7)) % len(authors)]
        if commenter == pr["author"]:
            commenter = authors[(authors.index(commenter) + 1) % len(authors)]
        positive = i % 2 == 0
        if positive:
            tag, body = positive_body(rng)
        else:
            tag, body = None, negative_body(rng)
        created = base + timedelta(days=(i % 80) * 7 + 1 + i % 5, minutes=i)
        comment = {
            "comment_id": f"synth-c{i + 1:04d}", "pr": pr["pr_id"],
            "author": commenter, "body": body, "created_at": stamp(created),
        }
        comments.append(comment)
        labels.append({
            "comment_id": comment["comment_id"], "pr": comment["pr"],
            "project": project, "author": commenter, "body": body,
            "created_at": comment["created_at"], "label": positive,
            "annotator": "merged", "rule_tags": [tag] if positive else [],
            "has_explanation": positive,
        })
    contributors = [{
        "login": login, "display_name": f"Dev {login[-2:]}", "location": None,
        "account_created_at": stamp(utc(2019, 1, 1)), "deleted": False,
    } for login in authors]
    return prs, comments, contributors, labels


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    TESTS_DATA.mkdir(parents=True, exist_ok=True)

    prs, comments, truth, positive_meta = build_fixture()
    write_store(DATA / "fixture_store", prs, comments, contributors_records())
    labeled = write_labels(DATA / "fixture_labels.ndjson", prs, comments,
                           truth, positive_meta)
    write_names(DATA / "fixture_names.json")
    write_config(DATA / "fixture_config.json")
    (TESTS_DATA / "fixture_truth.json").write_text(
        json.dumps(truth, indent=0, sort_keys=True) + "\n", encoding="utf-8")

    s_prs, s_comments, s_contributors, s_labels = build_synthetic()
    synth_root = DATA / "synthetic400_store"
    synth_root.mkdir(parents=True, exist_ok=True)
    with (synth_root / "synth.prs.ndjson").open("w", encoding="utf-8") as fh:
        for record in s_prs:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    with (synth_root / "synth.comments.ndjson").open("w", encoding="utf-8") as fh:
        for record in s_comments:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    with (synth_root / "synth.contributors.ndjson").open("w", encoding="utf-8") as fh:
        for record in s_contributors:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    with (DATA / "synthetic400_labels.ndjson").open("w", encoding="utf-8") as fh:
        for record in s_labels:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")

    n_prs = sum(len(v) for v in prs.values())
    n_comments = sum(len(v) for v in comments.values())
    n_pos = sum(truth.values())
    print(f"fixture: {n_prs} PRs, {n_comments} comments "
          f"({n_pos} planted positive), {labeled} labeled")
    print(f"synthetic: {len(s_prs)} PRs, {len(s_comments)} comments, "
          f"{len(s_labels)} labeled")


if __name__ == "__main__":
    main()
