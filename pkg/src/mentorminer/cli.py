"""Command-line entry point.

Exit codes: 0 success, 1 partial report (a pipeline stage failed), 2 fatal.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .annotation import (
    LabelRecord,
    RULE_TAGS,
    append_label,
    cohens_kappa,
    draw_sample,
    load_session,
    merge_labels,
    required_sample_size,
    save_session,
)
from .annotation import load_labeled_examples
from .classifier import (
    FAMILIES,
    classify_corpus,
    load_model,
    load_scores,
    randomized_search,
    save_model,
    train as train_model,
    write_scores,
)
from .demography import (
    FixtureGenderClient,
    GenderCache,
    NamsorClient,
    infer_genders,
)
from .hosting import RestHostingClient, load_corpus_via_client
from .ingestion import IngestError, apply_exclusions, load_corpus, write_store
from .relations import build_instances, write_instances
from .report import RENDER_FORMATS, load_config, render, run_pipeline, write_bundle
from .resources import resolve_path


class _Settings:
    def __init__(self):
        self.config: str | None = None
        self.seed_sample: int | None = None
        self.seed_train: int | None = None
        self.offline: bool = False


pass_settings = click.make_pass_decorator(_Settings, ensure=True)


def _fatal(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


@click.group()
@click.version_option(version=__version__)
@click.option("--config", default=None, help="Pipeline config file, or 'fixture'.")
@click.option("--seed-sample", type=int, default=None, help="Override the sampling seed.")
@click.option("--seed-train", type=int, default=None, help="Override the training seed.")
@click.option("--offline", is_flag=True, help="Never touch the network.")
@click.pass_context
def cli(ctx, config, seed_sample, seed_train, offline):
    """Implicit-mentoring mining toolkit."""
    settings = ctx.ensure_object(_Settings)
    settings.config = config
    settings.seed_sample = seed_sample
    settings.seed_train = seed_train
    settings.offline = offline


@cli.command()
@click.option("--source", required=True, help="Record directory or hosting-API URL.")
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Store directory.")
@click.option("--projects", default=None, help="Comma-separated projects (URL sources).")
@click.option("--offline", is_flag=True, help="Never touch the network.")
@pass_settings
def ingest(settings, source, out_dir, projects, offline):
    """Load, validate, and persist a PR corpus."""
    try:
        if source.startswith(("http://", "https://")):
            if settings.offline or offline:
                _fatal("--offline forbids URL sources; pass a record directory")
            if not projects:
                _fatal("URL sources require --projects")
            client = RestHostingClient(source)
            result = load_corpus_via_client(client, projects.split(","))
        else:
            result = load_corpus(resolve_path(source))
        write_store(result.corpus, out_dir, result.rejections)
    except IngestError as exc:
        _fatal(str(exc))
    click.echo(f"loaded {len(result.corpus.prs)} PRs, {len(result.corpus.comments)} "
               f"comments, {len(result.corpus.contributors)} contributors; "
               f"{len(result.rejections)} rejected record(s)")


@cli.command()
@click.option("--store", required=True, help="Store directory.")
@click.option("--size", default="auto", help="Sample size, or 'auto' for Cochran sizing.")
@click.option("--seed", type=int, default=None, help="Sampling seed.")
@click.option("--confidence", type=float, default=0.95, show_default=True)
@click.option("--margin", type=float, default=0.05, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@pass_settings
def sample(settings, store, size, seed, confidence, margin, out_path):
    """Draw a labeling sample from the exclusion-filtered corpus."""
    corpus = apply_exclusions(load_corpus(resolve_path(store)).corpus)
    if seed is None:
        seed = settings.seed_sample if settings.seed_sample is not None else 7
    if size == "auto":
        n = required_sample_size(max(len(corpus.comments), 1), confidence, margin)
        n = min(n, len(corpus.comments))
    else:
        n = int(size)
    session = draw_sample(corpus, n, seed)
    save_session(session, out_path)
    click.echo(f"sampled {session.size} comments (seed {seed}) -> {out_path}")


@cli.command()
@click.option("--session", "session_path", required=True, type=click.Path(exists=True))
@click.option("--store", required=True, help="Store directory (for comment bodies).")
@click.option("--annotator", required=True)
@click.option("--limit", type=int, default=None, help="Stop after this many comments.")
def label(session_path, store, annotator, limit):
    """Interactive labeling prompt loop."""
    session = load_session(session_path)
    corpus = apply_exclusions(load_corpus(resolve_path(store)).corpus)
    bodies = {c.comment_id: c.body for c in corpus.comments}
    pending = session.pending_for(annotator)
    if limit is not None:
        pending = pending[:limit]
    click.echo(f"{len(pending)} comment(s) to label as {annotator!r}. "
               "Rule tags: " + ", ".join(RULE_TAGS))
    labeled = 0
    for comment_id in pending:
        body = bodies.get(comment_id, "(comment not in store)")
        click.echo(f"\n--- {comment_id} ---\n{body}\n")
        answer = click.prompt("mentoring? [y/n/q]",
                              type=click.Choice(["y", "n", "q"]), show_choices=False)
        if answer == "q":
            break
        if answer == "n":
            entry = LabelRecord(label=False)
        else:
            while True:
                tags = click.prompt(f"rule tags (comma-separated from {RULE_TAGS})")
                chosen = tuple(sorted({t.strip() for t in tags.split(",") if t.strip()}))
                has_explanation = click.confirm("does it include an explanation?")
                try:
                    entry = LabelRecord(label=True, rule_tags=chosen,
                                        has_explanation=has_explanation)
                    break
                except ValueError as exc:
                    click.echo(f"invalid: {exc}")
        append_label(session_path, annotator, comment_id, entry)
        labeled += 1
    click.echo(f"\nrecorded {labeled} label(s)")


@cli.command()
@click.option("--session", "session_path", required=True, type=click.Path(exists=True))
def irr(session_path):
    """Inter-rater reliability (Cohen's kappa) for a double-labeled session."""
    session = load_session(session_path)
    annotators = sorted(name for name in session.labels if name != "adjudicator")
    if len(annotators) != 2:
        _fatal(f"need exactly two annotators, found {annotators}")
    first, second = annotators
    shared = [cid for cid in session.sample
              if cid in session.labels[first] and cid in session.labels[second]]
    if not shared:
        _fatal("annotators share no labeled comments")
    kappa = cohens_kappa([session.labels[first][cid].label for cid in shared],
                         [session.labels[second][cid].label for cid in shared])
    _, conflicts = merge_labels(session)
    click.echo(f"overlap: {len(shared)} comments")
    click.echo(f"kappa: {kappa:.4f}")
    click.echo(f"unresolved conflicts: {len(conflicts)}")


@cli.command(name="train")
@click.option("--labels", "labels_path", required=True, type=click.Path(exists=True))
@click.option("--family", default="rf", type=click.Choice(FAMILIES), show_default=True)
@click.option("--search", "grid_path", default=None, type=click.Path(exists=True),
              help="Randomized-search grid (JSON of lists).")
@click.option("--iterations", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_path", required=True, type=click.Path())
@pass_settings
def train_cmd(settings, labels_path, family, grid_path, iterations, seed, out_path):
    """Train (optionally tune) a classifier and write the model container."""
    labeled = load_labeled_examples(labels_path)
    if seed is None:
        seed = settings.seed_train if settings.seed_train is not None else 7
    hyperparameters = None
    if grid_path is not None:
        grid = json.loads(Path(grid_path).read_text(encoding="utf-8"))
        result = randomized_search(family, labeled, grid, iterations, seed)
        hyperparameters = result.hyperparameters
        click.echo(f"search best CV F1 {result.cv_f1:.4f} with {hyperparameters}")
    model = train_model(family, labeled, hyperparameters=hyperparameters, seed=seed)
    save_model(model, out_path)
    click.echo(f"trained {family} on {len(labeled)} examples -> {out_path}")


@cli.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--store", required=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def classify(model_path, store, out_path):
    """Score every surviving comment in a store."""
    model = load_model(model_path)
    corpus = apply_exclusions(load_corpus(resolve_path(store)).corpus)
    classifications = classify_corpus(model, corpus)
    write_scores(classifications, out_path)
    positives = sum(1 for entry in classifications.values() if entry.label)
    click.echo(f"scored {len(classifications)} comments ({positives} positive) -> {out_path}")


@cli.command()
@click.option("--store", required=True)
@click.option("--scores", "scores_path", required=True, type=click.Path(exists=True))
@click.option("--threshold-days", type=float, default=183.0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def relations(store, scores_path, threshold_days, out_path):
    """Build mentoring instances from a scores file."""
    corpus = apply_exclusions(load_corpus(resolve_path(store)).corpus)
    instances = build_instances(corpus, load_scores(scores_path),
                                threshold_days=threshold_days)
    write_instances(instances, out_path)
    click.echo(f"built {len(instances)} mentoring instance(s) -> {out_path}")


@cli.command()
@click.option("--store", required=True)
@click.option("--client", "client_kind", default="fixture",
              type=click.Choice(["fixture", "http"]), show_default=True)
@click.option("--names", "names_path", default=None,
              help="Name table for the fixture client.")
@click.option("--cache", "cache_path", default=None, type=click.Path())
@click.option("--out", "out_path", default=None, type=click.Path())
@pass_settings
def genders(settings, store, client_kind, names_path, cache_path, out_path):
    """Infer contributor genders through the configured client."""
    if settings.offline and client_kind == "http":
        _fatal("--offline forbids the http gender client")
    corpus = apply_exclusions(load_corpus(resolve_path(store)).corpus)
    if client_kind == "fixture":
        if not names_path:
            _fatal("fixture client requires --names")
        client = FixtureGenderClient(resolve_path(names_path))
    else:
        client = NamsorClient()
    cache = GenderCache(cache_path)
    inference = infer_genders(corpus.contributors, client, cache)
    click.echo(f"resolved {len(inference.records)} contributor(s); "
               f"{len(inference.unresolved)} unresolved")
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            for record in inference.records:
                handle.write(json.dumps({
                    "contributor": record.contributor,
                    "gender": record.inferred.value,
                    "probability": record.probability,
                    "source": record.source,
                }) + "\n")
        click.echo(f"records -> {out_path}")


def _emit_report(config, out_dir, formats, scores_path=None, classifier_stage=True):
    bundle = run_pipeline(config, scores_path=scores_path,
                          classifier_stage=classifier_stage)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_bundle(bundle, out / "bundle.json")
    wanted = RENDER_FORMATS if formats == "all" else tuple(formats.split(","))
    for fmt in wanted:
        render(bundle, fmt, out)
    if bundle.partial:
        click.echo("report is PARTIAL; failed stages:", err=True)
        for name, error in bundle.failed_stages:
            click.echo(f"  {name}: {error}", err=True)
        sys.exit(1)
    click.echo(f"report -> {out}")


@cli.command()
@click.option("--store", required=True)
@click.option("--scores", "scores_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--format", "formats", default="all", show_default=True)
@pass_settings
def analyze(settings, store, scores_path, out_dir, formats):
    """Analysis tables from an existing store and scores file."""
    config = load_config(settings.config or "fixture",
                         seed_sample=settings.seed_sample,
                         seed_train=settings.seed_train,
                         offline=settings.offline)
    config = type(config)(**{**config.to_dict(), "store": store,
                             "families": tuple(config.families)})
    _emit_report(config, out_dir, formats, scores_path=scores_path,
                 classifier_stage=False)


@cli.command()
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--format", "formats", default="all", show_default=True,
              help="plain, csv, json-lines, or all.")
@pass_settings
def report(settings, out_dir, formats):
    """Run the full pipeline from --config and render every table."""
    if settings.config is None:
        _fatal("report requires --config (a file path or 'fixture')")
    config = load_config(settings.config,
                         seed_sample=settings.seed_sample,
                         seed_train=settings.seed_train,
                         offline=settings.offline)
    _emit_report(config, out_dir, formats)


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.exceptions.Abort:
        sys.exit(2)
    except click.ClickException as exc:
        exc.show()
        sys.exit(2)
    except SystemExit:
        raise
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
