"""Mine pull-request review threads for implicit mentoring.

The pipeline ingests PR data, classifies comments with a trained text
classifier, reconstructs mentor-mentee relations with experience
direction and group arity, infers contributor gender through a pluggable
client, and reproduces the full set of analysis tables.
"""

__version__ = "0.1.0"

from .annotation import cohens_kappa, draw_sample, required_sample_size
from .classifier import (
    MentoringClassifier,
    classify_corpus,
    cross_validate,
    evaluate,
    randomized_search,
    train,
)
from .demography import (
    Gender,
    PairCounts,
    exclude_ungendered_projects,
    homophily_rate,
    infer_genders,
    pair_counts,
)
from .features import CommentVectorizer
from .ingestion import Corpus, apply_exclusions, corpus_stats, load_corpus
from .metrics import complexity_tests, prevalence, wordiness_split
from .relations import (
    Arity,
    Direction,
    arity,
    build_instances,
    classify_direction,
    direction_distribution,
    experience,
)
from .report import PipelineConfig, load_config, render, run_pipeline
from .stats import (
    StatResult,
    bonferroni,
    cohens_d,
    cohens_h,
    two_prop_z_test,
    welch_t_test,
)

__all__ = [
    "Arity",
    "CommentVectorizer",
    "Corpus",
    "Direction",
    "Gender",
    "MentoringClassifier",
    "PairCounts",
    "PipelineConfig",
    "StatResult",
    "apply_exclusions",
    "arity",
    "bonferroni",
    "build_instances",
    "classify_corpus",
    "classify_direction",
    "cohens_d",
    "cohens_h",
    "cohens_kappa",
    "complexity_tests",
    "corpus_stats",
    "cross_validate",
    "direction_distribution",
    "draw_sample",
    "evaluate",
    "exclude_ungendered_projects",
    "experience",
    "homophily_rate",
    "infer_genders",
    "load_config",
    "load_corpus",
    "pair_counts",
    "prevalence",
    "randomized_search",
    "render",
    "required_sample_size",
    "run_pipeline",
    "train",
    "two_prop_z_test",
    "welch_t_test",
    "wordiness_split",
]
