"""Vocabularies, sparse document-term count matrices and TF-IDF weighting."""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .corpus import Corpus


class Vocabulary:
    """Ordered bijection between terms and ``range(len(vocab))``."""

    __slots__ = ("_terms", "_index")

    def __init__(self, terms: Iterable[str]):
        self._terms = tuple(terms)
        self._index = {t: i for i, t in enumerate(self._terms)}
        if len(self._index) != len(self._terms):
            raise ValueError("vocabulary terms must be unique")

    @classmethod
    def from_corpus(cls, corpus: Corpus) -> "Vocabulary":
        return build_vocabulary(corpus)

    @property
    def terms(self) -> tuple[str, ...]:
        return self._terms

    def index(self, term: str) -> int | None:
        return self._index.get(term)

    def __contains__(self, term) -> bool:
        return term in self._index

    def __getitem__(self, term: str) -> int:
        return self._index[term]

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __repr__(self) -> str:
        return f"Vocabulary({len(self)} terms)"

    def save(self, path: str | os.PathLike) -> None:
        """Write ``term<TAB>index`` lines in index order."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for i, t in enumerate(self._terms):
                fh.write(f"{t}\t{i}\n")

    @classmethod
    def load(cls, path: str | os.PathLike) -> "Vocabulary":
        pairs = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                term, idx = line.rsplit("\t", 1)
                pairs.append((int(idx), term))
        pairs.sort()
        if [i for i, _ in pairs] != list(range(len(pairs))):
            raise ValueError(f"{path}: indices are not dense from 0")
        return cls(t for _, t in pairs)


def build_vocabulary(train_corpus: Corpus) -> Vocabulary:
    """Lexicographically ordered vocabulary of the unique training tokens."""
    if not train_corpus.is_tokenized:
        raise ValueError("corpus is not tokenized")
    terms = {t for doc in train_corpus for t in doc.token_seq}
    if not terms:
        raise ValueError("empty token stream")
    return Vocabulary(sorted(terms))


@dataclass(frozen=True)
class DocTermMatrix:
    """Raw term counts, one row per document in corpus order."""

    counts: sp.csr_matrix
    labels: tuple[str, ...]
    vocab: Vocabulary
    classes: tuple[str, ...]

    @property
    def n_docs(self) -> int:
        return self.counts.shape[0]

    @property
    def df(self) -> np.ndarray:
        return np.bincount(self.counts.indices, minlength=len(self.vocab)).astype(np.int64)

    @property
    def label_index(self) -> np.ndarray:
        """Row labels as indices into ``classes``."""
        pos = {c: i for i, c in enumerate(self.classes)}
        return np.array([pos[l] for l in self.labels], dtype=np.int64)

    def restrict(self, vocab: Vocabulary) -> "DocTermMatrix":
        """Columns of ``vocab`` in its order; terms unknown here become zero columns."""
        cols = np.array([self.vocab.index(t) if t in self.vocab else -1 for t in vocab], dtype=np.int64)
        present = cols >= 0
        sub = self.counts[:, cols[present]]
        if present.all():
            out = sub
        else:
            mapping = np.flatnonzero(present)
            sub = sub.tocoo()
            out = sp.csr_matrix((sub.data, (sub.row, mapping[sub.col])), shape=(self.n_docs, len(vocab)))
        return DocTermMatrix(sp.csr_matrix(out, dtype=np.int64), self.labels, vocab, self.classes)


@dataclass(frozen=True)
class WeightedMatrix:
    weights: sp.csr_matrix
    idf: np.ndarray
    row_normalized: bool
    labels: tuple[str, ...]
    vocab: Vocabulary
    classes: tuple[str, ...]

    @property
    def n_docs(self) -> int:
        return self.weights.shape[0]

    @property
    def label_index(self) -> np.ndarray:
        pos = {c: i for i, c in enumerate(self.classes)}
        return np.array([pos[l] for l in self.labels], dtype=np.int64)


def count_rows(token_seqs: Sequence[Sequence[str]], vocab: Vocabulary) -> sp.csr_matrix:
    """CSR count matrix for raw token sequences; out-of-vocabulary tokens are ignored."""
    if len(vocab) == 0:
        raise ValueError("vocabulary is empty")
    indptr = [0]
    indices: list[int] = []
    data: list[int] = []
    lookup = vocab._index
    for tokens in token_seqs:
        row = Counter(i for i in map(lookup.get, tokens) if i is not None)
        for i in sorted(row):
            indices.append(i)
            data.append(row[i])
        indptr.append(len(indices))
    return sp.csr_matrix(
        (np.asarray(data, dtype=np.int64), np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(token_seqs), len(vocab)),
    )


def count_matrix(corpus: Corpus, vocab: Vocabulary, classes: Sequence[str] | None = None) -> DocTermMatrix:
    """Exact term counts of ``corpus`` over ``vocab``.

    ``classes`` defaults to the corpus classes; pass the training classes when
    vectorizing a test split so class indices line up.
    """
    if not corpus.is_tokenized:
        raise ValueError("corpus is not tokenized")
    counts = count_rows([d.token_seq for d in corpus], vocab)
    return DocTermMatrix(counts, tuple(corpus.labels), vocab, tuple(classes or corpus.classes))


def compute_idf(matrix: DocTermMatrix) -> np.ndarray:
    """``ln(N / df) + 1`` per term."""
    df = matrix.df
    if (df == 0).any():
        missing = [matrix.vocab.terms[i] for i in np.flatnonzero(df == 0)[:5]]
        raise ValueError(f"terms with zero document frequency: {missing}")
    return np.log(matrix.n_docs / df) + 1.0


def apply_tfidf(matrix: DocTermMatrix, idf: np.ndarray, l2_normalize_rows: bool = True) -> WeightedMatrix:
    idf = np.asarray(idf, dtype=np.float64)
    if idf.shape != (len(matrix.vocab),):
        raise ValueError(f"idf has shape {idf.shape}, expected ({len(matrix.vocab)},)")
    weights = sp.csr_matrix(matrix.counts, dtype=np.float64) @ sp.diags(idf)
    weights = sp.csr_matrix(weights)
    if l2_normalize_rows:
        weights = l2_normalize(weights)
    return WeightedMatrix(weights, idf, l2_normalize_rows, matrix.labels, matrix.vocab, matrix.classes)


def l2_normalize(X: sp.csr_matrix) -> sp.csr_matrix:
    X = sp.csr_matrix(X, dtype=np.float64, copy=True)
    norms = np.sqrt(np.asarray(X.multiply(X).sum(axis=1)).ravel())
    norms[norms == 0] = 1.0
    X.data /= np.repeat(norms, np.diff(X.indptr))
    return X


def top_frequent_vocabulary(matrix: DocTermMatrix, n: int) -> Vocabulary:
    """The ``n`` terms with the highest total count, ties by term."""
    if n < 1:
        raise ValueError("n must be positive")
    totals = np.asarray(matrix.counts.sum(axis=0)).ravel()
    terms = matrix.vocab.terms
    order = sorted(range(len(terms)), key=lambda i: (-totals[i], terms[i]))
    return Vocabulary(terms[i] for i in order[:n])
