"""Pipeline orchestration and table rendering.

``run_pipeline`` executes ingest, classification, relations, demography,
metrics, and the statistical tables from one declarative config, emitting
a :class:`ReportBundle` of raw-valued tables stamped with the config hash
and seeds.  A stage failure marks the bundle partial and downstream
stages that depend on it are skipped; independent stages still run.

``render`` writes display files (plain text, CSV, or JSON lines) from a
bundle.  Rendering only formats - percentages to two decimals, statistics
to two, significance levels to three - and never computes new numbers, so
a fixed config reproduces byte-identical output.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import __version__
from .annotation import load_labeled_examples
from .classifier import (
    FAMILIES,
    classify_corpus,
    cross_validate,
    load_scores,
    train,
)
from .demography import (
    FixtureGenderClient,
    Gender,
    GenderCache,
    NamsorClient,
    exclude_ungendered_projects,
    homophily_rate,
    infer_genders,
    pair_counts,
)
from .ingestion import apply_exclusions, corpus_stats, load_corpus
from .metrics import ComplexityOutcome, complexity_tests, prevalence
from .relations import (
    Direction,
    arity_distribution,
    build_instances,
    direction_distribution,
)
from .resources import data_path, resolve_path
from .stats import DegenerateTestError, StatResult, two_prop_z_test

__all__ = [
    "PipelineConfig",
    "RENDER_FORMATS",
    "ReportBundle",
    "Table",
    "load_config",
    "read_bundle",
    "render",
    "run_pipeline",
    "write_bundle",
]

RENDER_FORMATS = ("plain", "csv", "json-lines")

_DIRECTION_SCOPES = (
    ("overall", None),
    ("top-down", Direction.TOP_DOWN),
    ("peer", Direction.PEER),
    ("bottom-up", Direction.BOTTOM_UP),
)


@dataclass(frozen=True)
class PipelineConfig:
    """Declarative pipeline configuration; all randomness flows from the
    two named seeds."""

    store: str
    labels: str
    gender_client: str = "fixture"
    gender_names: str | None = None
    gender_cache: str | None = None
    families: tuple[str, ...] = FAMILIES
    family: str = "rf"
    folds: int = 10
    seed_sample: int = 7
    seed_train: int = 7
    alpha: float = 0.05
    comparisons: int = 3
    threshold_days: float = 183.0
    score_threshold: float = 0.5

    def to_dict(self) -> dict:
        return {
            "store": self.store,
            "labels": self.labels,
            "gender_client": self.gender_client,
            "gender_names": self.gender_names,
            "gender_cache": self.gender_cache,
            "families": list(self.families),
            "family": self.family,
            "folds": self.folds,
            "seed_sample": self.seed_sample,
            "seed_train": self.seed_train,
            "alpha": self.alpha,
            "comparisons": self.comparisons,
            "threshold_days": self.threshold_days,
            "score_threshold": self.score_threshold,
        }

    @property
    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def load_config(name_or_path: str, *, seed_sample: int | None = None,
                seed_train: int | None = None, offline: bool = False) -> PipelineConfig:
    """Load a config file; the name ``fixture`` selects the bundled demo
    config.  Seed overrides and offline mode change the config (and hence
    the config hash)."""
    path = data_path("fixture_config.json") if name_or_path == "fixture" \
        else Path(name_or_path)
    raw = json.loads(path.read_text(encoding="utf-8"))
    if seed_sample is not None:
        raw["seed_sample"] = seed_sample
    if seed_train is not None:
        raw["seed_train"] = seed_train
    if offline:
        raw["gender_client"] = "fixture"
    raw["families"] = tuple(raw.get("families", FAMILIES))
    known = set(PipelineConfig.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return PipelineConfig(**raw)


# ---------------------------------------------------------------------------
# Tables and bundles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Table:
    """Raw-valued table plus per-column display kinds."""

    name: str
    columns: tuple[str, ...]
    rows: tuple[dict, ...]
    formats: dict[str, str]


@dataclass(frozen=True)
class ReportBundle:
    config_hash: str
    seed_sample: int
    seed_train: int
    version: str
    partial: bool
    failed_stages: tuple[tuple[str, str], ...]
    tables: tuple[Table, ...]

    def table(self, name: str) -> Table:
        for table in self.tables:
            if table.name == name:
                return table
        raise KeyError(f"bundle has no table named {name!r}")


def _jsonable(value):
    if isinstance(value, float) and (math.isnan(value) or math.isinf(value)):
        return None
    return value


def write_bundle(bundle: ReportBundle, path: str | Path) -> None:
    payload = {
        "config_hash": bundle.config_hash,
        "seed_sample": bundle.seed_sample,
        "seed_train": bundle.seed_train,
        "version": bundle.version,
        "partial": bundle.partial,
        "failed_stages": [list(item) for item in bundle.failed_stages],
        "tables": [
            {
                "name": t.name,
                "columns": list(t.columns),
                "formats": t.formats,
                "rows": [{k: _jsonable(v) for k, v in row.items()} for row in t.rows],
            }
            for t in bundle.tables
        ],
    }
    Path(path).write_text(
        json.dumps(payload, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def read_bundle(path: str | Path) -> ReportBundle:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return ReportBundle(
        config_hash=payload["config_hash"],
        seed_sample=payload["seed_sample"],
        seed_train=payload["seed_train"],
        version=payload["version"],
        partial=payload["partial"],
        failed_stages=tuple((s, e) for s, e in payload["failed_stages"]),
        tables=tuple(
            Table(name=t["name"], columns=tuple(t["columns"]),
                  rows=tuple(t["rows"]), formats=t["formats"])
            for t in payload["tables"]
        ),
    )


# ---------------------------------------------------------------------------
# Stat-row helper
# ---------------------------------------------------------------------------

def _stat_cells(result: StatResult | None, error: str | None) -> dict:
    if result is None:
        return {"statistic": None, "df": None, "p_value": None,
                "p_one_sided": None, "estimate": None, "effect_size": None,
                "alpha_adjusted": None, "error": error}
    return {
        "statistic": result.statistic,
        "df": result.df,
        "p_value": result.p_value,
        "p_one_sided": result.p_value_one_sided,
        "estimate": result.estimate,
        "effect_size": result.effect_size,
        "alpha_adjusted": result.alpha_adjusted,
        "error": None,
    }


_STAT_FORMATS = {
    "statistic": "stat", "df": "stat", "p_value": "p", "p_one_sided": "p",
    "estimate": "stat", "effect_size": "stat", "alpha_adjusted": "alpha",
    "error": "text",
}


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

def run_pipeline(config: PipelineConfig, *, scores_path: str | Path | None = None,
                 classifier_stage: bool = True) -> ReportBundle:
    """Run ingest through the statistical tables and collect the bundle.

    ``scores_path`` substitutes an existing scores file for training and
    classification; ``classifier_stage=False`` additionally drops the
    cross-validation table (the ``analyze`` entry point).
    """
    failed: list[tuple[str, str]] = []
    tables: list[Table] = []
    state: dict[str, object] = {}

    def stage(name: str, requires: tuple[str, ...], fn: Callable[[], None]) -> None:
        missing = [req for req in requires if req not in state]
        if missing:
            failed.append((name, f"skipped: requires {', '.join(missing)}"))
            return
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - partial-failure contract
            failed.append((name, f"{type(exc).__name__}: {exc}"))

    def ingest() -> None:
        result = load_corpus(resolve_path(config.store))
        state["corpus"] = apply_exclusions(result.corpus)

    def labels_stage() -> None:
        state["labels"] = load_labeled_examples(resolve_path(config.labels))

    def summary_stage() -> None:
        summary = corpus_stats(state["corpus"])
        tables.append(Table(
            name="corpus_summary",
            columns=("dimension", "max", "min", "mean", "median"),
            rows=tuple({"dimension": row.dimension, "max": row.maximum,
                        "min": row.minimum, "mean": row.mean, "median": row.median}
                       for row in summary.rows),
            formats={"dimension": "text", "max": "stat", "min": "stat",
                     "mean": "stat", "median": "stat"},
        ))

    def classifier_cv_stage() -> None:
        labeled = state["labels"]
        rows = []
        if labeled:
            for family in config.families:
                cv = cross_validate(family, labeled, folds=config.folds,
                                    seed=config.seed_train)
                rows.append({"family": family, "precision": cv.mean.precision,
                             "recall": cv.mean.recall, "f1": cv.mean.f1,
                             "auc": cv.mean.auc})
        tables.append(Table(
            name="classifier_metrics",
            columns=("family", "precision", "recall", "f1", "auc"),
            rows=tuple(rows),
            formats={"family": "text", "precision": "stat", "recall": "stat",
                     "f1": "stat", "auc": "stat"},
        ))

    def classify_stage() -> None:
        corpus = state["corpus"]
        if scores_path is not None:
            scores = load_scores(scores_path)
            missing = [c.comment_id for c in corpus.comments
                       if c.comment_id not in scores]
            if missing:
                raise ValueError(f"scores file misses {len(missing)} comment(s)")
            state["classifications"] = scores
            return
        if corpus.is_empty():
            state["classifications"] = {}
            return
        labeled = state["labels"]
        if not labeled:
            raise ValueError("cannot classify a non-empty corpus without labels")
        model = train(config.family, labeled, seed=config.seed_train)
        state["classifications"] = classify_corpus(model, corpus,
                                                   threshold=config.score_threshold)

    def relations_stage() -> None:
        corpus = state["corpus"]
        state["instances"] = build_instances(
            corpus, state["classifications"], threshold_days=config.threshold_days)

    def metrics_stage() -> None:
        corpus = state["corpus"]
        instances = state["instances"]
        summary = prevalence(corpus, instances)
        tables.append(Table(
            name="prevalence",
            columns=("n_prs", "n_comments", "n_instances", "n_comment_authors",
                     "n_mentors", "pr_share", "mentor_share",
                     "mean_comments_per_pr", "sd_comments_per_pr"),
            rows=(({
                "n_prs": summary.n_prs,
                "n_comments": summary.n_comments,
                "n_instances": summary.n_instances,
                "n_comment_authors": summary.n_comment_authors,
                "n_mentors": summary.n_mentors,
                "pr_share": summary.pr_fraction,
                "mentor_share": summary.mentor_fraction,
                "mean_comments_per_pr": summary.mean_comments_per_pr,
                "sd_comments_per_pr": summary.sd_comments_per_pr,
            },) if not summary.is_empty() else ()),
            formats={"n_prs": "count", "n_comments": "count", "n_instances": "count",
                     "n_comment_authors": "count", "n_mentors": "count",
                     "pr_share": "percent", "mentor_share": "percent",
                     "mean_comments_per_pr": "stat", "sd_comments_per_pr": "stat"},
        ))
        outcomes: tuple[ComplexityOutcome, ...] = ()
        if not corpus.is_empty():
            results = complexity_tests(corpus, instances, alpha=config.alpha,
                                       comparisons=config.comparisons)
            outcomes = (results.wordiness, results.reopened)
        tables.append(Table(
            name="complexity_tests",
            columns=("split", "n_complex", "n_plain") + tuple(_STAT_FORMATS),
            rows=tuple({"split": o.split, "n_complex": o.n_high, "n_plain": o.n_low,
                        **_stat_cells(o.result, o.error)} for o in outcomes),
            formats={"split": "text", "n_complex": "count", "n_plain": "count",
                     **_STAT_FORMATS},
        ))

    def direction_stage() -> None:
        instances = state["instances"]
        rows = []
        if instances:
            for frame in ("project", "global"):
                for row in direction_distribution(instances, frame):
                    rows.append({"frame": frame, "direction": row.direction.value,
                                 "count": row.count, "share": row.share,
                                 "mean_abs_gap_days": row.mean_abs_gap_days,
                                 "sd_gap_days": row.sd_gap_days})
        tables.append(Table(
            name="direction_distribution",
            columns=("frame", "direction", "count", "share",
                     "mean_abs_gap_days", "sd_gap_days"),
            rows=tuple(rows),
            formats={"frame": "text", "direction": "text", "count": "count",
                     "share": "percent", "mean_abs_gap_days": "stat",
                     "sd_gap_days": "stat"},
        ))
        arity_rows = []
        if instances:
            for kind, count, share in arity_distribution(instances):
                arity_rows.append({"arity": kind.value, "prs": count, "share": share})
        tables.append(Table(
            name="arity_distribution",
            columns=("arity", "prs", "share"),
            rows=tuple(arity_rows),
            formats={"arity": "text", "prs": "count", "share": "percent"},
        ))

    def demography_stage() -> None:
        corpus = state["corpus"]
        if config.gender_client == "fixture":
            if not config.gender_names:
                raise ValueError("fixture gender client requires a gender_names table")
            client = FixtureGenderClient(resolve_path(config.gender_names))
        elif config.gender_client == "http":
            client = NamsorClient()
        else:
            raise ValueError(f"unknown gender client {config.gender_client!r}")
        cache = GenderCache(resolve_path(config.gender_cache)
                            if config.gender_cache else None)
        inference = infer_genders(corpus.contributors, client, cache)
        state["gender_records"] = inference.records
        state["retained_projects"] = exclude_ungendered_projects(corpus, inference.records)

    def gender_tables_stage() -> None:
        corpus = state["corpus"]
        instances = state["instances"]
        records = state["gender_records"]
        retained = set(state["retained_projects"])
        gender_of = {r.contributor: r.inferred for r in records}
        comments = [c for c in corpus.comments if c.project in retained]
        kept = [i for i in instances if i.project in retained]

        def by_gender(logins) -> dict[Gender, int]:
            counts = {Gender.WOMAN: 0, Gender.MAN: 0}
            for login in logins:
                gender = gender_of.get(login)
                if gender is not None:
                    counts[gender] += 1
            return counts

        # An empty corpus keeps all five tables explicitly empty.
        populate = not corpus.is_empty()
        comment_counts = by_gender(c.author for c in comments)
        participation_rows = []
        if populate:
            groups = (("comment_authors", by_gender({c.author for c in comments})),
                      ("mentors", by_gender({i.mentor for i in kept})),
                      ("comments", comment_counts),
                      ("mentoring_comments", by_gender(i.mentor for i in kept)))
            for label, counts in groups:
                total = counts[Gender.WOMAN] + counts[Gender.MAN]
                participation_rows.append({
                    "group": label,
                    "women": counts[Gender.WOMAN],
                    "women_share": counts[Gender.WOMAN] / total if total else None,
                    "men": counts[Gender.MAN],
                    "men_share": counts[Gender.MAN] / total if total else None,
                    "total": total,
                })
        tables.append(Table(
            name="gender_participation",
            columns=("group", "women", "women_share", "men", "men_share", "total"),
            rows=tuple(participation_rows),
            formats={"group": "text", "women": "count", "women_share": "percent",
                     "men": "count", "men_share": "percent", "total": "count"},
        ))

        # Mentoring share of each gender's comments, overall and per
        # project-frame direction (denominators are direction-free).
        n_men = comment_counts[Gender.MAN]
        n_women = comment_counts[Gender.WOMAN]
        summary_rows = []
        for scope, direction in _DIRECTION_SCOPES if populate else ():
            in_scope = [i for i in kept
                        if direction is None or i.project_direction is direction]
            x = by_gender(i.mentor for i in in_scope)
            cells = {"scope": scope,
                     "mentoring_by_men": x[Gender.MAN], "comments_by_men": n_men,
                     "mentoring_by_women": x[Gender.WOMAN], "comments_by_women": n_women}
            try:
                if n_men == 0 or n_women == 0:
                    raise DegenerateTestError("a gender group has no comments")
                result = two_prop_z_test(x[Gender.MAN], n_men, x[Gender.WOMAN], n_women,
                                         alpha=config.alpha,
                                         comparisons=config.comparisons)
                cells.update(_stat_cells(result, None))
            except (DegenerateTestError, ValueError) as exc:
                cells.update(_stat_cells(None, str(exc)))
            summary_rows.append(cells)
        tables.append(Table(
            name="gender_summary",
            columns=("scope", "mentoring_by_men", "comments_by_men",
                     "mentoring_by_women", "comments_by_women") + tuple(_STAT_FORMATS),
            rows=tuple(summary_rows),
            formats={"scope": "text", "mentoring_by_men": "count",
                     "comments_by_men": "count", "mentoring_by_women": "count",
                     "comments_by_women": "count", **_STAT_FORMATS},
        ))

        # Pair counts per scope, then homophily and cross-gender tests.
        pair_rows = {pair: {"pair": pair} for pair in ("ww", "wm", "mw", "mm")}
        total_row: dict = {"pair": "total"}
        dropped_row: dict = {"pair": "dropped_ungendered"}
        homophily_rows = []
        cross_rows = []
        for scope, direction in _DIRECTION_SCOPES if populate else ():
            in_scope = [i for i in kept
                        if direction is None or i.project_direction is direction]
            counts, dropped = pair_counts(in_scope, records)
            for pair in ("ww", "wm", "mw", "mm"):
                value = getattr(counts, pair)
                pair_rows[pair][f"{scope}_n"] = value
                pair_rows[pair][f"{scope}_share"] = (
                    value / counts.total if counts.total else None)
            total_row[f"{scope}_n"] = counts.total
            total_row[f"{scope}_share"] = None
            dropped_row[f"{scope}_n"] = dropped
            dropped_row[f"{scope}_share"] = None

            rate = homophily_rate(counts) if counts.total else None
            hom_cells = {"scope": scope, "gendered_pairs": counts.total, "rate": rate}
            try:
                if counts.total == 0:
                    raise DegenerateTestError("no gendered pairs")
                result = two_prop_z_test(
                    counts.ww + counts.mm, counts.total,
                    counts.wm + counts.mw, counts.total,
                    alpha=config.alpha, comparisons=config.comparisons)
                hom_cells.update(_stat_cells(result, None))
            except (DegenerateTestError, ValueError) as exc:
                hom_cells.update(_stat_cells(None, str(exc)))
            homophily_rows.append(hom_cells)

            cross_cells = {"scope": scope,
                           "m_to_w": counts.mw, "men_mentoring": counts.mm + counts.mw,
                           "w_to_m": counts.wm, "women_mentoring": counts.ww + counts.wm}
            try:
                if counts.mm + counts.mw == 0 or counts.ww + counts.wm == 0:
                    raise DegenerateTestError("a mentor-gender group is empty")
                result = two_prop_z_test(
                    counts.mw, counts.mm + counts.mw,
                    counts.wm, counts.ww + counts.wm,
                    alpha=config.alpha, comparisons=config.comparisons)
                cross_cells.update(_stat_cells(result, None))
            except (DegenerateTestError, ValueError) as exc:
                cross_cells.update(_stat_cells(None, str(exc)))
            cross_rows.append(cross_cells)

        scope_columns = []
        scope_formats = {}
        for scope, _ in _DIRECTION_SCOPES:
            scope_columns += [f"{scope}_n", f"{scope}_share"]
            scope_formats[f"{scope}_n"] = "count"
            scope_formats[f"{scope}_share"] = "percent"
        pair_table_rows = ([pair_rows[p] for p in ("ww", "wm", "mw", "mm")]
                           + [total_row, dropped_row]) if populate else []
        tables.append(Table(
            name="gender_pair_counts",
            columns=("pair",) + tuple(scope_columns),
            rows=tuple(pair_table_rows),
            formats={"pair": "text", **scope_formats},
        ))
        tables.append(Table(
            name="homophily",
            columns=("scope", "gendered_pairs", "rate") + tuple(_STAT_FORMATS),
            rows=tuple(homophily_rows),
            formats={"scope": "text", "gendered_pairs": "count", "rate": "percent",
                     **_STAT_FORMATS},
        ))
        tables.append(Table(
            name="cross_gender_tests",
            columns=("scope", "m_to_w", "men_mentoring", "w_to_m", "women_mentoring")
                    + tuple(_STAT_FORMATS),
            rows=tuple(cross_rows),
            formats={"scope": "text", "m_to_w": "count", "men_mentoring": "count",
                     "w_to_m": "count", "women_mentoring": "count", **_STAT_FORMATS},
        ))

    stage("ingest", (), ingest)
    stage("labels", (), labels_stage)
    stage("corpus_summary", ("corpus",), summary_stage)
    if classifier_stage:
        stage("classifier_cv", ("labels",), classifier_cv_stage)
    stage("classify", ("corpus",) if scores_path is not None else ("corpus", "labels"),
          classify_stage)
    stage("relations", ("corpus", "classifications"), relations_stage)
    stage("metrics", ("corpus", "instances"), metrics_stage)
    stage("directions", ("instances",), direction_stage)
    stage("demography", ("corpus",), demography_stage)
    stage("gender_tables", ("corpus", "instances", "gender_records"),
          gender_tables_stage)

    return ReportBundle(
        config_hash=config.config_hash,
        seed_sample=config.seed_sample,
        seed_train=config.seed_train,
        version=__version__,
        partial=bool(failed),
        failed_stages=tuple(failed),
        tables=tuple(tables),
    )


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def format_cell(value, kind: str) -> str:
    """Display form of one raw cell value."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "NA"
    if kind == "count":
        return str(int(value))
    if kind == "percent":
        return f"{value * 100:.2f}%"
    if kind == "stat":
        return f"{value:.2f}"
    if kind == "alpha":
        return f"{value:.3f}"
    if kind == "p":
        return "<0.001" if value < 0.001 else f"{value:.3f}"
    return str(value)


def _formatted_rows(table: Table) -> list[list[str]]:
    return [[format_cell(row.get(col), table.formats.get(col, "text"))
             for col in table.columns] for row in table.rows]


def _meta_lines(bundle: ReportBundle) -> list[str]:
    lines = [
        f"config_hash: {bundle.config_hash}",
        f"seed_sample: {bundle.seed_sample}",
        f"seed_train: {bundle.seed_train}",
        f"version: {bundle.version}",
        f"partial: {'yes' if bundle.partial else 'no'}",
    ]
    for name, error in bundle.failed_stages:
        lines.append(f"stage_failure: {name}: {error}")
    return lines


def render(bundle: ReportBundle, format: str, out_dir: str | Path) -> list[Path]:
    """Render one bundle into display files; returns the written paths."""
    if format not in RENDER_FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {RENDER_FORMATS}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if format == "plain":
        return [_render_plain(bundle, out)]
    if format == "csv":
        return _render_csv(bundle, out)
    return [_render_json_lines(bundle, out)]


def _render_plain(bundle: ReportBundle, out: Path) -> Path:
    chunks = ["mentorminer report"] + _meta_lines(bundle)
    for table in bundle.tables:
        chunks.append("")
        chunks.append(f"== {table.name} ==")
        header = list(table.columns)
        body = _formatted_rows(table)
        widths = [max(len(header[i]), *(len(r[i]) for r in body)) if body
                  else len(header[i]) for i in range(len(header))]
        def line(cells: list[str]) -> str:
            return "  ".join(cell.rjust(widths[i]) for i, cell in enumerate(cells))
        chunks.append(line(header))
        for row in body:
            chunks.append(line(row))
        if not body:
            chunks.append("(no rows)")
    path = out / "report.txt"
    path.write_text("\n".join(chunks) + "\n", encoding="utf-8")
    return path


def _csv_escape(cell: str) -> str:
    if any(ch in cell for ch in ",\"\n"):
        return '"' + cell.replace('"', '""') + '"'
    return cell


def _render_csv(bundle: ReportBundle, out: Path) -> list[Path]:
    paths = []
    meta_path = out / "meta.csv"
    meta_rows = ["key,value"] + [line.replace(": ", ",", 1) for line in _meta_lines(bundle)]
    meta_path.write_text("\n".join(meta_rows) + "\n", encoding="utf-8")
    paths.append(meta_path)
    for table in bundle.tables:
        path = out / f"{table.name}.csv"
        lines = [",".join(table.columns)]
        for row in _formatted_rows(table):
            lines.append(",".join(_csv_escape(cell) for cell in row))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        paths.append(path)
    return paths


def _render_json_lines(bundle: ReportBundle, out: Path) -> Path:
    path = out / "report.ndjson"
    lines = [json.dumps({
        "kind": "meta", "config_hash": bundle.config_hash,
        "seed_sample": bundle.seed_sample, "seed_train": bundle.seed_train,
        "version": bundle.version, "partial": bundle.partial,
        "failed_stages": [list(item) for item in bundle.failed_stages],
    })]
    for table in bundle.tables:
        for row in _formatted_rows(table):
            record = {"kind": "row", "table": table.name}
            record.update(dict(zip(table.columns, row)))
            lines.append(json.dumps(record, ensure_ascii=False))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
