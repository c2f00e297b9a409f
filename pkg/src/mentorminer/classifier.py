"""Train, tune, evaluate, and apply the mentoring-comment classifiers.

Five shallow classifier families operate on tf-idf features from
:mod:`mentorminer.features`.  The random-forest defaults are the tuned
operating point used for corpus-wide scoring; its score for a comment is
the fraction of trees voting positive, thresholded at 0.5.  Everything is
seeded and single-threaded by default so repeated runs produce identical
scores files.
"""

from __future__ import annotations

import base64
import json
import pickle
import random
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.ensemble import RandomForestClassifier
from sklearn.naive_bayes import BernoulliNB
from sklearn.neighbors import KNeighborsClassifier
from sklearn.svm import SVC
from sklearn.tree import DecisionTreeClassifier
from sklearn.utils.validation import check_is_fitted

from .annotation import LabeledExample
from .features import CommentVectorizer
from .ingestion import Corpus

__all__ = [
    "CommentScore",
    "CrossValidation",
    "DEFAULT_HYPERPARAMETERS",
    "DEFAULT_SEARCH_GRIDS",
    "DEFAULT_THRESHOLD",
    "EvalMetrics",
    "FAMILIES",
    "MentoringClassifier",
    "SearchResult",
    "TrainingError",
    "classify_corpus",
    "cross_validate",
    "evaluate",
    "load_model",
    "load_scores",
    "randomized_search",
    "save_model",
    "train",
    "write_scores",
]

FAMILIES = ("rf", "svm", "nb", "dt", "knn")

DEFAULT_THRESHOLD = 0.5

MODEL_FORMAT = "mentorminer-model"
MODEL_FORMAT_VERSION = 1

# Tuned operating point for the forest; plain library defaults for the
# other families (their grids below are the documented starting points).
DEFAULT_HYPERPARAMETERS: dict[str, dict] = {
    "rf": {
        "n_estimators": 2800,
        "max_depth": 73,
        "min_samples_split": 20,
        "min_samples_leaf": 2,
        "bootstrap": True,
        "max_features": "sqrt",
    },
    "svm": {"C": 1.0, "kernel": "rbf", "gamma": "scale"},
    "nb": {"alpha": 1.0, "binarize": 0.0},
    "dt": {"max_depth": None, "min_samples_split": 2, "min_samples_leaf": 1},
    "knn": {"n_neighbors": 5, "weights": "uniform"},
}

DEFAULT_SEARCH_GRIDS: dict[str, dict[str, list]] = {
    "rf": {
        "n_estimators": [400, 800, 1600, 2800],
        "max_depth": [None, 20, 45, 73, 100],
        "min_samples_split": [2, 10, 20],
        "min_samples_leaf": [1, 2, 4],
        "bootstrap": [True, False],
    },
    "svm": {"C": [0.1, 1.0, 10.0], "kernel": ["linear", "rbf"], "gamma": ["scale", "auto"]},
    "nb": {"alpha": [0.1, 0.5, 1.0, 2.0]},
    "dt": {"max_depth": [None, 10, 30, 73], "min_samples_split": [2, 10, 20],
           "min_samples_leaf": [1, 2, 4]},
    "knn": {"n_neighbors": [3, 5, 9, 15], "weights": ["uniform", "distance"]},
}


class TrainingError(ValueError):
    """The training set cannot produce a usable model."""


@dataclass(frozen=True)
class EvalMetrics:
    """Precision, recall, F1, and AUC; AUC is NaN when undefined."""

    precision: float
    recall: float
    f1: float
    auc: float


@dataclass(frozen=True)
class CrossValidation:
    mean: EvalMetrics
    per_fold: tuple[EvalMetrics, ...]


@dataclass(frozen=True)
class SearchResult:
    hyperparameters: dict
    cv_f1: float
    trials: tuple[tuple[dict, float], ...]


@dataclass(frozen=True)
class CommentScore:
    label: bool
    score: float


def _build_estimator(family: str, hyperparameters: Mapping, seed: int):
    if family == "rf":
        return RandomForestClassifier(**hyperparameters, random_state=seed, n_jobs=1)
    if family == "svm":
        return SVC(**hyperparameters, probability=True, random_state=seed)
    if family == "nb":
        return BernoulliNB(**hyperparameters)
    if family == "dt":
        return DecisionTreeClassifier(**hyperparameters, random_state=seed)
    if family == "knn":
        return KNeighborsClassifier(**hyperparameters)
    raise ValueError(f"unknown classifier family {family!r}; expected one of {FAMILIES}")


def resolved_hyperparameters(family: str, hyperparameters: Mapping | None) -> dict:
    """Family defaults overlaid with any caller-supplied values."""
    if family not in FAMILIES:
        raise ValueError(f"unknown classifier family {family!r}; expected one of {FAMILIES}")
    resolved = dict(DEFAULT_HYPERPARAMETERS[family])
    if hyperparameters:
        resolved.update(hyperparameters)
    return resolved


class MentoringClassifier(BaseEstimator, ClassifierMixin):
    """Binary mentoring-comment classifier over raw comment bodies.

    A fitted instance freezes its vocabulary and produces deterministic
    scores in [0, 1]: for the forest, the fraction of trees voting
    positive; for the other families, the positive-class probability.

    Parameters
    ----------
    family : str
        One of ``"rf"``, ``"svm"``, ``"nb"``, ``"dt"``, ``"knn"``.
    hyperparameters : mapping, optional
        Overrides merged onto the family defaults.
    seed : int
        Master seed for every stochastic component of training.
    """

    def __init__(self, family: str = "rf", hyperparameters: Mapping | None = None,
                 seed: int = 0):
        self.family = family
        self.hyperparameters = hyperparameters
        self.seed = seed

    def fit(self, X: Sequence[str], y) -> "MentoringClassifier":
        labels = np.asarray([bool(v) for v in y], dtype=bool)
        if len(labels) != len(X):
            raise ValueError("X and y must have equal length")
        if labels.all() or (~labels).all():
            raise TrainingError("training data must contain both classes")
        params = resolved_hyperparameters(self.family, self.hyperparameters)
        self.vectorizer_ = CommentVectorizer().fit(X)
        matrix = self.vectorizer_.transform(X)
        self.estimator_ = _build_estimator(self.family, params, self.seed)
        self.estimator_.fit(matrix, labels.astype(int))
        self.resolved_hyperparameters_ = params
        self.classes_ = np.array([False, True])
        return self

    @property
    def vocabulary(self) -> list[str]:
        check_is_fitted(self, "vectorizer_")
        return list(self.vectorizer_.vocabulary_)

    def predict_scores(self, X: Sequence[str]) -> np.ndarray:
        """Score in [0, 1] per document; empty input gives an empty array."""
        check_is_fitted(self, "estimator_")
        if len(X) == 0:
            return np.zeros(0, dtype=np.float64)
        matrix = self.vectorizer_.transform(X)
        if self.family == "rf":
            votes = np.zeros(matrix.shape[0], dtype=np.float64)
            for tree in self.estimator_.estimators_:
                votes += tree.predict(matrix)
            return votes / len(self.estimator_.estimators_)
        positive = int(np.flatnonzero(self.estimator_.classes_ == 1)[0])
        return self.estimator_.predict_proba(matrix)[:, positive]

    def predict_proba(self, X: Sequence[str]) -> np.ndarray:
        scores = self.predict_scores(X)
        return np.column_stack([1.0 - scores, scores])

    def predict(self, X: Sequence[str]) -> np.ndarray:
        return self.predict_scores(X) >= DEFAULT_THRESHOLD


def _split_examples(labeled: Sequence[LabeledExample]) -> tuple[list[str], list[bool]]:
    return [ex.comment.body for ex in labeled], [ex.label for ex in labeled]


def train(family: str, labeled: Sequence[LabeledExample],
          hyperparameters: Mapping | None = None, seed: int = 0) -> MentoringClassifier:
    """Fit one classifier family on labeled examples."""
    bodies, labels = _split_examples(labeled)
    return MentoringClassifier(family=family, hyperparameters=hyperparameters,
                               seed=seed).fit(bodies, labels)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def evaluate(scores: Sequence[float], truth: Sequence[bool],
             threshold: float = DEFAULT_THRESHOLD) -> EvalMetrics:
    """Confusion-matrix metrics at a threshold plus rank-statistic AUC.

    A document is predicted positive when score >= threshold.  Precision
    and recall fall back to 0.0 when their denominators vanish; F1 is the
    harmonic mean (0.0 when P + R = 0).  AUC uses average ranks, so tied
    score pairs count half; with single-class truth it is NaN.
    """
    if len(scores) != len(truth):
        raise ValueError("scores and truth must have equal length")
    values = np.asarray(scores, dtype=np.float64)
    if values.size and (values.min() < 0.0 or values.max() > 1.0):
        raise ValueError("scores must lie in [0, 1]")
    labels = np.asarray([bool(v) for v in truth], dtype=bool)
    predicted = values >= threshold
    tp = int(np.sum(predicted & labels))
    fp = int(np.sum(predicted & ~labels))
    fn = int(np.sum(~predicted & labels))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
    n_pos = int(labels.sum())
    n_neg = int(labels.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        auc = float("nan")
    else:
        ranks = _average_ranks(values)
        rank_sum = float(ranks[labels].sum())
        auc = (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)
    return EvalMetrics(precision=precision, recall=recall, f1=f1, auc=auc)


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing their average rank."""
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(values.size, dtype=np.float64)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def cross_validate(family: str, labeled: Sequence[LabeledExample],
                   hyperparameters: Mapping | None = None, folds: int = 10,
                   seed: int = 0) -> CrossValidation:
    """Mean metrics over k folds: shuffle once by seed, split near-equally.

    Folds partition the examples; each withheld fold is scored by a model
    fit on the rest.  Per-fold metrics are kept for auditing.  Fold AUCs
    that are undefined (single-class fold) are excluded from the mean.
    """
    if folds < 2:
        raise ValueError("folds must be at least 2")
    n = len(labeled)
    if n < folds:
        raise ValueError(f"{n} examples cannot fill {folds} folds")
    bodies, labels = _split_examples(labeled)
    labels_arr = np.asarray(labels, dtype=bool)
    order = np.random.default_rng(seed).permutation(n)
    parts = np.array_split(order, folds)
    per_fold: list[EvalMetrics] = []
    for held_out in parts:
        mask = np.zeros(n, dtype=bool)
        mask[held_out] = True
        train_bodies = [bodies[i] for i in range(n) if not mask[i]]
        train_labels = labels_arr[~mask]
        model = MentoringClassifier(family=family, hyperparameters=hyperparameters,
                                    seed=seed).fit(train_bodies, train_labels)
        test_bodies = [bodies[i] for i in held_out]
        scores = model.predict_scores(test_bodies)
        per_fold.append(evaluate(scores, labels_arr[held_out]))
    mean = EvalMetrics(
        precision=float(np.mean([m.precision for m in per_fold])),
        recall=float(np.mean([m.recall for m in per_fold])),
        f1=float(np.mean([m.f1 for m in per_fold])),
        auc=_mean_defined([m.auc for m in per_fold]),
    )
    return CrossValidation(mean=mean, per_fold=tuple(per_fold))


def _mean_defined(values: list[float]) -> float:
    defined = [v for v in values if not np.isnan(v)]
    return float(np.mean(defined)) if defined else float("nan")


def randomized_search(family: str, labeled: Sequence[LabeledExample],
                      grid: Mapping[str, Sequence], iterations: int, seed: int,
                      folds: int = 10) -> SearchResult:
    """Uniformly sample hyperparameter combinations, keep the best CV F1.

    Combinations are drawn independently per parameter from the grid; the
    argmax by mean F1 wins, ties broken by the first combination seen.
    """
    if not grid:
        raise ValueError("search grid must be non-empty")
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    rng = random.Random(seed)
    names = sorted(grid)
    trials: list[tuple[dict, float]] = []
    best: tuple[dict, float] | None = None
    for _ in range(iterations):
        combo = {name: rng.choice(list(grid[name])) for name in names}
        score = cross_validate(family, labeled, hyperparameters=combo,
                               folds=folds, seed=seed).mean.f1
        trials.append((combo, score))
        if best is None or score > best[1]:
            best = (combo, score)
    return SearchResult(hyperparameters=best[0], cv_f1=best[1], trials=tuple(trials))


# ---------------------------------------------------------------------------
# Corpus scoring
# ---------------------------------------------------------------------------

def classify_corpus(model: MentoringClassifier, corpus: Corpus,
                    threshold: float = DEFAULT_THRESHOLD) -> dict[str, CommentScore]:
    """Score every comment in an exclusion-filtered corpus."""
    check_is_fitted(model, "estimator_")
    comments = list(corpus.comments)
    if not comments:
        return {}
    scores = model.predict_scores([c.body for c in comments])
    return {
        c.comment_id: CommentScore(label=bool(s >= threshold), score=float(s))
        for c, s in zip(comments, scores)
    }


def write_scores(classifications: Mapping[str, CommentScore], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as handle:
        for comment_id in sorted(classifications):
            entry = classifications[comment_id]
            handle.write(json.dumps({
                "comment_id": comment_id,
                "score": round(entry.score, 10),
                "label": entry.label,
            }) + "\n")


def load_scores(path: str | Path) -> dict[str, CommentScore]:
    classifications: dict[str, CommentScore] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        classifications[str(record["comment_id"])] = CommentScore(
            label=bool(record["label"]), score=float(record["score"]))
    return classifications


# ---------------------------------------------------------------------------
# Model persistence
# ---------------------------------------------------------------------------

def save_model(model: MentoringClassifier, path: str | Path) -> None:
    """Write a fitted model as a versioned self-describing container."""
    check_is_fitted(model, "estimator_")
    payload = base64.b64encode(zlib.compress(pickle.dumps(model), level=6)).decode("ascii")
    envelope = {
        "format": MODEL_FORMAT,
        "version": MODEL_FORMAT_VERSION,
        "family": model.family,
        "hyperparameters": model.resolved_hyperparameters_,
        "seed": model.seed,
        "vocabulary": model.vocabulary,
        "fitted": payload,
    }
    Path(path).write_text(json.dumps(envelope) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> MentoringClassifier:
    """Load a model container written by :func:`save_model`.

    The fitted payload is a pickle; only load files you trust.
    """
    envelope = json.loads(Path(path).read_text(encoding="utf-8"))
    if envelope.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path} is not a model container")
    if envelope.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model container version {envelope.get('version')!r}")
    model = pickle.loads(zlib.decompress(base64.b64decode(envelope["fitted"])))
    if not isinstance(model, MentoringClassifier):
        raise ValueError("model container payload has the wrong type")
    if model.family != envelope.get("family"):
        raise ValueError("model container family does not match its payload")
    return model
