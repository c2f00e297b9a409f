from __future__ import annotations

import math

import numpy as np
import pytest

from mentorminer.features import (
    CODE_PLACEHOLDER,
    CommentVectorizer,
    URL_PLACEHOLDER,
    normalize_body,
    tokenize,
)


def test_case_folding_gives_identical_vectors():
    vectorizer = CommentVectorizer().fit(["Fix this", "something else entirely"])
    a = vectorizer.featurize("Fix this")
    b = vectorizer.featurize("fix THIS")
    assert a == b


def test_url_collapses_to_single_placeholder_token():
    assert tokenize("https://example.org/a/b?c=1") == [URL_PLACEHOLDER]
    vectorizer = CommentVectorizer().fit(["see https://a.example", "plain words here"])
    vector = vectorizer.featurize("http://b.example/path")
    assert len(vector.weights) == 1
    index = vectorizer.term_index_[URL_PLACEHOLDER]
    assert set(vector.weights) == {index}


def test_code_blocks_collapse():
    tokens = tokenize("run this:\n```\nmake -j4 check\n```\nplease")
    assert tokens == ["run", "this", CODE_PLACEHOLDER, "please"]
    assert tokenize("`inline()` rocks") == [CODE_PLACEHOLDER, "rocks"]


def test_single_character_tokens_dropped():
    assert tokenize("a b cd") == ["cd"]


def test_tf_idf_hand_computed_two_document_corpus():
    # {"run the tool", "run it"}: idf(run) = ln(2/2) = 0, idf(tool) = ln 2.
    vectorizer = CommentVectorizer().fit(["run the tool", "run it"])
    vector = vectorizer.featurize("run the tool")
    run_index = vectorizer.term_index_["run"]
    tool_index = vectorizer.term_index_["tool"]
    the_index = vectorizer.term_index_["the"]
    assert run_index not in vector.weights  # weight exactly zero
    assert vector.weights[tool_index] == pytest.approx(math.log(2.0))
    assert vector.weights[the_index] == pytest.approx(math.log(2.0))


def test_term_frequency_scales_weight():
    vectorizer = CommentVectorizer().fit(["tool tool tool", "other words"])
    single = vectorizer.featurize("tool")
    triple = vectorizer.featurize("tool tool tool")
    index = vectorizer.term_index_["tool"]
    assert triple.weights[index] == pytest.approx(3 * single.weights[index])


def test_out_of_vocabulary_terms_ignored():
    vectorizer = CommentVectorizer(vocabulary=["tool"]).fit(["run the tool", "run it"])
    vector = vectorizer.featurize("tool gadget widget")
    assert set(vector.weights) == {vectorizer.term_index_["tool"]}


def test_supplied_vocabulary_term_absent_from_corpus_weighs_zero():
    vectorizer = CommentVectorizer(vocabulary=["tool", "ghostterm"]).fit(["the tool"])
    vector = vectorizer.featurize("ghostterm tool")
    assert vectorizer.term_index_["ghostterm"] not in vector.weights


def test_empty_after_normalization_gives_empty_vector():
    vectorizer = CommentVectorizer().fit(["some words here", "more words"])
    assert vectorizer.featurize("!!! ???").weights == {}
    assert vectorizer.featurize("a").weights == {}


def test_weights_nonnegative_finite_and_in_bounds():
    docs = ["run the tool now", "tool chain labs", "see https://x.example `code`",
            "```\nblock\n```", "plain chatter"]
    vectorizer = CommentVectorizer().fit(docs)
    matrix = vectorizer.transform(docs)
    assert matrix.shape == (len(docs), len(vectorizer.vocabulary_))
    assert np.all(np.isfinite(matrix.data))
    assert np.all(matrix.data >= 0)
    assert matrix.indices.max() < len(vectorizer.vocabulary_)


def test_featurize_depends_only_on_input_and_frozen_vocabulary():
    docs = ["alpha beta", "beta gamma", "gamma delta"]
    v1 = CommentVectorizer().fit(docs)
    v2 = CommentVectorizer().fit(list(reversed(docs)))
    assert v1.vocabulary_ == v2.vocabulary_
    assert v1.vocabulary_version_ == v2.vocabulary_version_
    assert v1.featurize("beta gamma") == v2.featurize("beta gamma")
    assert v1.featurize("beta gamma") == v1.featurize("beta gamma")


def test_fit_requires_documents():
    with pytest.raises(ValueError):
        CommentVectorizer().fit([])


def test_normalize_body_is_lowercase():
    assert normalize_body("MiXeD Case") == "mixed case"
