import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grantimpact.vsm import (DocumentVector, VectorSpace, build_index, cosine, tfidf_weight, vectorize)
from oracles import dense_cosine, dense_tfidf


def test_build_index_counts_documents():
    idx = build_index([["a", "b"], ["b", "c"]])
    assert idx.n_docs == 2
    assert dict(idx.df) == {"a": 1, "b": 2, "c": 1}
    assert idx.vocab_size == 3


def test_empty_doc_counts_toward_n_only():
    idx = build_index([["a"], [], ["a", "b"]])
    assert idx.n_docs == 3
    assert dict(idx.df) == {"a": 2, "b": 1}


def test_df_counts_documents_not_occurrences():
    assert dict(build_index([["a", "a", "a"]]).df) == {"a": 1}


def test_build_index_empty_collection():
    with pytest.raises(ValueError):
        build_index([])


def test_tfidf_weight_values():
    assert tfidf_weight(2, 1, 3) == pytest.approx(2.19722, abs=1e-5)
    assert tfidf_weight(2, 1, 3) == 2 * math.log(3)
    assert tfidf_weight(5, 4, 4) == 0.0
    assert tfidf_weight(0, 1, 9) == 0.0


@pytest.mark.parametrize("tf, df, n", [(1, 0, 3), (1, 4, 3), (-1, 1, 3)])
def test_tfidf_weight_contract(tf, df, n):
    with pytest.raises(ValueError):
        tfidf_weight(tf, df, n)


def test_vectorize_drops_zero_and_oov():
    idx = build_index([["a", "b"], ["b", "c"]])
    v = vectorize(["a", "b"], idx)
    assert dict(v.weights) == {"a": pytest.approx(0.69315, abs=1e-5)}
    assert v.norm == pytest.approx(math.log(2))
    oov = vectorize(["zz", "yy"], idx)
    assert oov.is_zero and oov.norm == 0.0
    assert vectorize(["a", "b"], idx) == v


def test_cosine_examples():
    a = DocumentVector.from_weights({"x": 1.0, "y": 1.0})
    b = DocumentVector.from_weights({"x": 1.0})
    assert cosine(a, b) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert cosine(a, a) == pytest.approx(1.0, abs=1e-9)
    assert cosine(a, DocumentVector.from_weights({"z": 3.0})) == 0.0
    assert cosine(a, DocumentVector.from_weights({})) == 0.0


def test_vector_rejects_negative_weights():
    with pytest.raises(ValueError):
        DocumentVector.from_weights({"x": -1.0})


def test_vector_space_does_not_index_queries():
    space = VectorSpace.from_texts({"d1": "video coding", "d2": "sensor networks"})
    before = dict(space.index.df)
    q = space.vector_for_text("video coding for sensors")
    assert dict(space.index.df) == before and space.index.n_docs == 2
    assert cosine(q, space.vector("d1")) > 0


# -- properties ---------------------------------------------------------------

terms = st.sampled_from([f"t{i}" for i in range(50)])
weights = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False, allow_infinity=False)
sparse = st.dictionaries(terms, weights, max_size=20).map(DocumentVector.from_weights)


@settings(max_examples=300, deadline=None)
@given(sparse, sparse)
def test_cosine_range_and_symmetry(a, b):
    c = cosine(a, b)
    assert 0.0 <= c <= 1.0
    assert c == cosine(b, a)


@settings(max_examples=200, deadline=None)
@given(sparse.filter(lambda v: not v.is_zero))
def test_self_similarity(v):
    assert cosine(v, v) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(sparse, sparse, st.floats(min_value=1e-3, max_value=1e3))
def test_scale_invariance(a, b, c):
    assert cosine(a.scaled(c), b) == pytest.approx(cosine(a, b), abs=1e-9)


docs_strategy = st.lists(st.lists(terms, max_size=15), min_size=1, max_size=10)


@settings(max_examples=100, deadline=None)
@given(docs_strategy)
def test_dense_oracle_equivalence(docs):
    idx = build_index(docs)
    vecs = [vectorize(d, idx) for d in docs]
    vocab, W = dense_tfidf(docs)
    for i, v in enumerate(vecs):
        for j, t in enumerate(vocab):
            assert v.weights.get(t, 0.0) == pytest.approx(W[i, j], abs=1e-9)
    for i in range(len(docs)):
        for j in range(len(docs)):
            assert cosine(vecs[i], vecs[j]) == pytest.approx(dense_cosine(W[i], W[j]), abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(docs_strategy, st.sampled_from([2.0, 10.0]))
def test_log_base_invariance(docs, base):
    idx = build_index(docs)
    natural = [vectorize(d, idx) for d in docs]
    other = [DocumentVector.from_weights({t: tf * math.log(idx.n_docs / idx.df[t], base)
                                          for t, tf in Counter(d).items()})
             for d in docs]
    for i in range(len(docs)):
        for j in range(len(docs)):
            assert cosine(other[i], other[j]) == pytest.approx(cosine(natural[i], natural[j]), abs=1e-9)


def test_norm_cached_matches_weights():
    v = DocumentVector.from_weights({"a": 3.0, "b": 4.0, "c": 0.0})
    assert "c" not in v.weights
    assert v.norm == 5.0
    assert v.norm ** 2 == pytest.approx(sum(w * w for w in v.weights.values()), rel=1e-9)
    assert np.isclose(v.scaled(2.0).norm, 10.0)
