"""Turn comment text into tf-idf bag-of-words features.

Normalization: lowercase, collapse fenced/inline code and URLs into
placeholder tokens, tokenize on non-word boundaries, and drop
single-character tokens.  Weights are raw term frequency times an
unsmoothed idf of ln(N / df), so a term present in every training
document weighs exactly zero.  Vectors are sparse; transforming text is a
pure function of the input and the frozen vocabulary.
"""

from __future__ import annotations

import hashlib
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

__all__ = [
    "CODE_PLACEHOLDER",
    "CommentVectorizer",
    "FeatureVector",
    "URL_PLACEHOLDER",
    "normalize_body",
    "tokenize",
]

CODE_PLACEHOLDER = "codeblock"
URL_PLACEHOLDER = "httpurl"

_FENCED_CODE = re.compile(r"```.*?```", re.DOTALL)
_INLINE_CODE = re.compile(r"`[^`\n]*`")
_URL = re.compile(r"(?:https?://|www\.)\S+")
_WORD = re.compile(r"\w+")


def normalize_body(body: str) -> str:
    """Lowercase and replace code spans and URLs with placeholder tokens."""
    text = body.lower()
    text = _FENCED_CODE.sub(f" {CODE_PLACEHOLDER} ", text)
    text = _INLINE_CODE.sub(f" {CODE_PLACEHOLDER} ", text)
    text = _URL.sub(f" {URL_PLACEHOLDER} ", text)
    return text


def tokenize(body: str) -> list[str]:
    """Normalized word tokens of length >= 2, in document order."""
    return [t for t in _WORD.findall(normalize_body(body)) if len(t) > 1]


@dataclass(frozen=True)
class FeatureVector:
    """Sparse tf-idf vector: term index -> weight, plus a vocabulary tag."""

    weights: dict[int, float]
    vocabulary_version: str


class CommentVectorizer(BaseEstimator, TransformerMixin):
    """Fit a vocabulary and idf table on comment bodies, emit sparse tf-idf.

    Parameters
    ----------
    vocabulary : sequence of str, optional
        Freeze the term list up front; out-of-vocabulary tokens are
        ignored and idf is still estimated from the fit corpus (terms
        never seen there get weight zero).
    """

    def __init__(self, vocabulary: Sequence[str] | None = None):
        self.vocabulary = vocabulary

    def fit(self, raw_documents: Sequence[str], y=None) -> "CommentVectorizer":
        docs = [tokenize(body) for body in raw_documents]
        if not docs:
            raise ValueError("cannot fit a vectorizer on an empty corpus")
        df: Counter[str] = Counter()
        for tokens in docs:
            df.update(set(tokens))
        if self.vocabulary is not None:
            terms = sorted(set(self.vocabulary))
        else:
            terms = sorted(df)
        self.vocabulary_ = terms
        self.term_index_ = {term: i for i, term in enumerate(terms)}
        n_docs = len(docs)
        idf = np.zeros(len(terms), dtype=np.float64)
        for term, i in self.term_index_.items():
            count = df.get(term, 0)
            idf[i] = math.log(n_docs / count) if count > 0 else 0.0
        self.idf_ = idf
        self.n_documents_ = n_docs
        digest = hashlib.sha256("\n".join(terms).encode("utf-8")).hexdigest()
        self.vocabulary_version_ = digest[:16]
        return self

    def transform(self, raw_documents: Sequence[str]) -> sparse.csr_matrix:
        check_is_fitted(self, "vocabulary_")
        rows: list[int] = []
        cols: list[int] = []
        data: list[float] = []
        for row, body in enumerate(raw_documents):
            for term, tf in Counter(tokenize(body)).items():
                col = self.term_index_.get(term)
                if col is None:
                    continue
                weight = tf * self.idf_[col]
                if weight != 0.0:
                    rows.append(row)
                    cols.append(col)
                    data.append(weight)
        return sparse.csr_matrix(
            (data, (rows, cols)),
            shape=(len(raw_documents), len(self.vocabulary_)),
            dtype=np.float64,
        )

    def featurize(self, body: str) -> FeatureVector:
        """Sparse mapping view of one document's tf-idf weights."""
        matrix = self.transform([body])
        weights = {int(c): float(v) for c, v in zip(matrix.indices, matrix.data)}
        return FeatureVector(weights=weights, vocabulary_version=self.vocabulary_version_)
