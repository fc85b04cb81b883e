"""One-vs-rest term statistics over a training count matrix."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np
import scipy.sparse as sp

from ..vectorize import DocTermMatrix, Vocabulary


@dataclass(frozen=True)
class ContingencyTable:
    """Document counts of a term's presence inside (pos) and outside (neg) a class."""

    tp: int
    fn: int
    fp: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fn, self.fp, self.tn) < 0:
            raise ValueError("contingency cells must be non-negative")

    @property
    def npos(self) -> int:
        return self.tp + self.fn

    @property
    def nneg(self) -> int:
        return self.fp + self.tn

    @property
    def n(self) -> int:
        return self.npos + self.nneg

    @property
    def tpr(self) -> float:
        return self.tp / self.npos

    @property
    def fpr(self) -> float:
        return self.fp / self.nneg


def _freeze(hist: Mapping[int, int]) -> Mapping[int, int]:
    return MappingProxyType({int(k): int(v) for k, v in sorted(hist.items()) if v})


@dataclass(frozen=True)
class TermClassStats:
    """Contingency table plus exact-count histograms for one (term, class).

    ``count_hist_pos[x]`` is the number of class documents in which the term
    occurs exactly ``x`` times; ``count_hist_neg`` is the same for the rest.
    """

    table: ContingencyTable
    count_hist_pos: Mapping[int, int] = field(default_factory=dict)
    count_hist_neg: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "count_hist_pos", _freeze(self.count_hist_pos))
        object.__setattr__(self, "count_hist_neg", _freeze(self.count_hist_neg))
        if sum(self.count_hist_pos.values()) != self.table.tp:
            raise ValueError("positive histogram does not sum to tp")
        if sum(self.count_hist_neg.values()) != self.table.fp:
            raise ValueError("negative histogram does not sum to fp")
        if any(x < 1 for x in (*self.count_hist_pos, *self.count_hist_neg)):
            raise ValueError("histogram counts start at 1")

    @classmethod
    def from_table(cls, tp: int, fn: int, fp: int, tn: int) -> "TermClassStats":
        """Stats for a term that occurs at most once per document."""
        return cls(ContingencyTable(tp, fn, fp, tn), {1: tp} if tp else {}, {1: fp} if fp else {})

    @property
    def pos_occurrences(self) -> int:
        return sum(x * n for x, n in self.count_hist_pos.items())

    @property
    def neg_occurrences(self) -> int:
        return sum(x * n for x, n in self.count_hist_neg.items())

    @property
    def lambda_pos(self) -> float:
        return self.pos_occurrences / self.table.npos

    @property
    def lambda_neg(self) -> float:
        return self.neg_occurrences / self.table.nneg

    @property
    def hist_gap(self) -> float:
        """``sum_x |tpr_x - fpr_x| / x`` over exact occurrence counts."""
        t = self.table
        xs = set(self.count_hist_pos) | set(self.count_hist_neg)
        return sum(
            abs(self.count_hist_pos.get(x, 0) / t.npos - self.count_hist_neg.get(x, 0) / t.nneg) / x
            for x in sorted(xs)
        )


class TermStats:
    """All (class, term) one-vs-rest statistics of a count matrix, as arrays.

    Array attributes have shape ``(n_classes, n_terms)``; ``npos`` and ``nneg``
    have shape ``(n_classes, 1)`` so they broadcast. Indexing with
    ``stats[term, class_label]`` returns a :class:`TermClassStats`.
    """

    def __init__(self, matrix: DocTermMatrix):
        if len(matrix.classes) < 2:
            raise ValueError("term statistics need at least 2 classes")
        if len(matrix.vocab) == 0:
            raise ValueError("empty vocabulary")
        y = matrix.label_index
        K, V = len(matrix.classes), len(matrix.vocab)
        class_sizes = np.bincount(y, minlength=K)
        if (class_sizes == 0).any():
            empty = [matrix.classes[i] for i in np.flatnonzero(class_sizes == 0)]
            raise ValueError(f"classes without documents: {empty}")

        self.vocab: Vocabulary = matrix.vocab
        self.classes: tuple[str, ...] = matrix.classes
        n = matrix.n_docs
        self.npos = class_sizes.reshape(K, 1).astype(np.int64)
        self.nneg = n - self.npos

        counts = sp.csr_matrix(matrix.counts)
        counts.eliminate_zeros()
        onehot = sp.csr_matrix((np.ones(n, dtype=np.int64), (y, np.arange(n))), shape=(K, n))
        present = sp.csr_matrix((np.ones_like(counts.data), counts.indices, counts.indptr), shape=counts.shape)
        self.tp = np.asarray((onehot @ present).todense(), dtype=np.int64)
        df = self.tp.sum(axis=0, keepdims=True)
        self.fp = df - self.tp
        self.fn = self.npos - self.tp
        self.tn = self.nneg - self.fp
        self.pos_occurrences = np.asarray((onehot @ counts).todense(), dtype=np.int64)
        self.neg_occurrences = self.pos_occurrences.sum(axis=0, keepdims=True) - self.pos_occurrences

        coo = counts.tocoo()
        self._cells = (coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data.astype(np.int64), y)
        self.hist_gap = self._hist_gap(V)

    def _hist_gap(self, V: int) -> np.ndarray:
        rows, cols, data, y = self._cells
        K = len(self.classes)
        gap = np.zeros((K, V))
        if data.size == 0:
            return gap
        # one key per distinct (term, exact count), with per-class document tallies
        keys, inv = np.unique(cols * (data.max() + 1) + data, return_inverse=True)
        key_term = keys // (data.max() + 1)
        key_x = (keys % (data.max() + 1)).astype(np.float64)
        tally = np.bincount(inv * K + y[rows], minlength=keys.size * K).reshape(keys.size, K)
        total = tally.sum(axis=1)
        for c in range(K):
            pos = tally[:, c] / self.npos[c, 0]
            neg = (total - tally[:, c]) / self.nneg[c, 0]
            gap[c] = np.bincount(key_term, weights=np.abs(pos - neg) / key_x, minlength=V)
        return gap

    @property
    def shape(self) -> tuple[int, int]:
        return self.tp.shape

    def __getitem__(self, key) -> TermClassStats:
        term, label = key
        t = self.vocab[term]
        c = self.classes.index(label)
        rows, cols, data, y = self._cells
        sel = cols == t
        in_class = y[rows[sel]] == c
        xs = data[sel]
        pos = dict(zip(*np.unique(xs[in_class], return_counts=True)))
        neg = dict(zip(*np.unique(xs[~in_class], return_counts=True)))
        table = ContingencyTable(int(self.tp[c, t]), int(self.fn[c, t]), int(self.fp[c, t]), int(self.tn[c, t]))
        return TermClassStats(table, pos, neg)


def build_stats(matrix: DocTermMatrix) -> TermStats:
    return TermStats(matrix)
