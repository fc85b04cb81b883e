import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from urduclf.corpus import Corpus, Document
from urduclf.vectorize import (
    Vocabulary,
    apply_tfidf,
    build_vocabulary,
    compute_idf,
    count_matrix,
    top_frequent_vocabulary,
)


def tok_corpus(docs):
    """``docs``: list of (label, "space separated tokens")."""
    return Corpus([Document(f"d{i}", lab, text, tuple(text.split())) for i, (lab, text) in enumerate(docs)])


def test_vocabulary_order():
    v = build_vocabulary(tok_corpus([("x", "b a a")]))
    assert v.terms == ("a", "b") and v["a"] == 0 and v["b"] == 1


def test_vocabulary_rejects_empty():
    c = Corpus([Document("d", "x", "text", ())])
    with pytest.raises(ValueError, match="empty"):
        build_vocabulary(c)


def test_vocabulary_file_roundtrip(tmp_path):
    v = Vocabulary(["ب", "ا", "ج"])
    v.save(tmp_path / "v.tsv")
    assert (tmp_path / "v.tsv").read_text(encoding="utf-8") == "ب\t0\nا\t1\nج\t2\n"
    assert Vocabulary.load(tmp_path / "v.tsv") == v


def test_count_matrix_rows():
    c = tok_corpus([("x", "a a b"), ("y", "c")])
    m = count_matrix(c, Vocabulary(["a", "b", "c"]))
    np.testing.assert_array_equal(m.counts.toarray(), [[2, 1, 0], [0, 0, 1]])
    assert m.labels == ("x", "y")


def test_oov_terms_ignored():
    train = tok_corpus([("x", "a b")])
    test = tok_corpus([("x", "a zzz zzz")])
    m = count_matrix(test, build_vocabulary(train))
    assert m.counts.shape == (1, 2)
    assert m.counts.sum() == 1


def test_df_and_conservation():
    c = tok_corpus([("x", "a b a"), ("y", "a c"), ("y", "a")])
    v = build_vocabulary(c)
    m = count_matrix(c, v)
    assert m.df[v["a"]] == m.n_docs == 3
    assert m.counts.sum() == c.token_count()


def test_empty_vocabulary_rejected():
    with pytest.raises(ValueError):
        count_matrix(tok_corpus([("x", "a")]), Vocabulary([]))


def test_idf_values():
    # N = 100 documents, DF = 10 -> ln(10) + 1
    docs = [("x", "t u")] * 10 + [("x", "u")] * 90
    m = count_matrix(tok_corpus(docs), Vocabulary(["t", "u"]))
    idf = compute_idf(m)
    assert idf[0] == pytest.approx(3.302585, abs=1e-6)
    assert idf[0] == pytest.approx(math.log(10) + 1, abs=1e-15)
    assert idf[1] == 1.0


def test_idf_rejects_zero_df():
    m = count_matrix(tok_corpus([("x", "a")]), Vocabulary(["a", "b"]))
    with pytest.raises(ValueError, match="zero document frequency"):
        compute_idf(m)


@given(st.lists(st.integers(1, 50), min_size=2, max_size=6, unique=True))
def test_idf_strictly_decreasing_in_df(dfs):
    n = max(dfs) + 3
    terms = [f"t{i}" for i in range(len(dfs))]
    docs = [("x", " ".join(t for t, df in zip(terms, dfs) if j < df) or "pad") for j in range(n)]
    m = count_matrix(tok_corpus(docs), Vocabulary(terms))
    idf = compute_idf(m)
    order = np.argsort(dfs)
    assert np.all(np.diff(idf[order]) < 0)


def test_tfidf_product_and_normalization():
    c = tok_corpus([("x", "a a a b b b b"), ("y", "a")])
    m = count_matrix(c, Vocabulary(["a", "b"]))
    raw = apply_tfidf(m, np.array([2.0, 1.0]), l2_normalize_rows=False)
    assert raw.weights[0, 0] == 6.0
    norm = apply_tfidf(m, np.array([1.0, 1.0]), l2_normalize_rows=True)
    np.testing.assert_allclose(norm.weights.toarray()[0], [0.6, 0.8], atol=1e-15)


def test_tfidf_zero_row_stays_zero():
    c = tok_corpus([("x", "a"), ("y", "zzz")])
    m = count_matrix(c, Vocabulary(["a"]))
    w = apply_tfidf(m, np.array([1.5]), l2_normalize_rows=True)
    assert w.weights[1].nnz == 0
    assert np.all(np.isfinite(w.weights.toarray()))


def test_tfidf_dimension_mismatch():
    m = count_matrix(tok_corpus([("x", "a")]), Vocabulary(["a"]))
    with pytest.raises(ValueError):
        apply_tfidf(m, np.ones(2))


def test_term_in_every_document_keeps_raw_tf():
    c = tok_corpus([("x", "a a b"), ("y", "a")])
    m = count_matrix(c, build_vocabulary(c))
    w = apply_tfidf(m, compute_idf(m), l2_normalize_rows=False)
    assert w.weights[0, 0] == 2.0


def test_rows_have_unit_norm(planted):
    v = build_vocabulary(planted)
    m = count_matrix(planted, v)
    w = apply_tfidf(m, compute_idf(m))
    norms = np.sqrt(np.asarray(w.weights.multiply(w.weights).sum(axis=1)).ravel())
    np.testing.assert_allclose(norms, 1.0, atol=1e-9)


def test_top_frequent():
    c = tok_corpus([("x", "c c b b a d")])
    m = count_matrix(c, build_vocabulary(c))
    assert top_frequent_vocabulary(m, 3).terms == ("b", "c", "a")
    assert len(top_frequent_vocabulary(m, 99)) == 4
    with pytest.raises(ValueError):
        top_frequent_vocabulary(m, 0)


def test_top_frequent_thousand(planted):
    m = count_matrix(planted, build_vocabulary(planted))
    assert len(top_frequent_vocabulary(m, 1000)) == 1000


def test_restrict_to_train_vocabulary_adds_no_columns():
    train = tok_corpus([("x", "a b"), ("y", "c")])
    test = tok_corpus([("x", "a d e"), ("y", "c c")])
    v = build_vocabulary(train)
    mt = count_matrix(test, v)
    assert mt.counts.shape[1] == len(v)
    sub = count_matrix(train, v).restrict(Vocabulary(["c", "a", "zz"]))
    np.testing.assert_array_equal(sub.counts.toarray(), [[0, 1, 0], [1, 0, 0]])
