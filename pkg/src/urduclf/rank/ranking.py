"""Per-class rankings, top-k unions and their TSV exports."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from ..vectorize import DocTermMatrix, Vocabulary
from .metrics import canonical_metric, score_all
from .stats import TermStats, build_stats

RANKING_HEADER = "term\tclass\tmetric\tscore\trank"
SELECTED_HEADER = "term\tbest_rank\tclasses"


def fmt_score(x: float) -> str:
    return format(float(x), ".17g")


class RankedList:
    """Terms of one class ordered by score (desc), then term (asc). Ranks start at 1."""

    __slots__ = ("class_label", "metric_id", "terms", "scores")

    def __init__(self, class_label: str, metric_id: str, terms: Iterable[str], scores: Iterable[float]):
        self.class_label = class_label
        self.metric_id = metric_id
        self.terms = tuple(terms)
        self.scores = np.asarray(list(scores) if not isinstance(scores, np.ndarray) else scores, dtype=np.float64)
        if len(self.terms) != self.scores.size:
            raise ValueError("terms and scores differ in length")

    @classmethod
    def from_scores(cls, class_label: str, metric_id: str, terms: tuple[str, ...], scores: np.ndarray,
                    term_order: np.ndarray | None = None) -> "RankedList":
        if term_order is None:
            term_order = np.argsort(np.array(terms, dtype=object), kind="stable")
        # position of each term in lexicographic order, used as the tie-break key
        lex_pos = np.empty(len(terms), dtype=np.int64)
        lex_pos[term_order] = np.arange(len(terms))
        order = np.lexsort((lex_pos, -scores))
        return cls(class_label, metric_id, (terms[i] for i in order), scores[order])

    @property
    def entries(self) -> list[tuple[str, float, int]]:
        return [(t, float(s), r) for r, (t, s) in enumerate(zip(self.terms, self.scores), 1)]

    def top(self, k: int) -> tuple[str, ...]:
        return self.terms[:k]

    def rank_of(self, term: str) -> int:
        return self.terms.index(term) + 1

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        return (isinstance(other, RankedList) and self.class_label == other.class_label
                and self.metric_id == other.metric_id and self.terms == other.terms
                and np.array_equal(self.scores, other.scores))

    def __repr__(self) -> str:
        return f"RankedList({self.class_label!r}, {self.metric_id}, {len(self)} terms)"


@dataclass(frozen=True)
class SelectedVocabulary:
    k: int
    metric_id: str
    terms: tuple[str, ...]
    best_rank: Mapping[str, int]
    provenance: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "best_rank", MappingProxyType(dict(self.best_rank)))
        object.__setattr__(self, "provenance", MappingProxyType(dict(self.provenance)))

    @property
    def vocabulary(self) -> Vocabulary:
        return Vocabulary(self.terms)

    def __len__(self) -> int:
        return len(self.terms)


def rank_per_class(matrix: DocTermMatrix | TermStats, metric_id: str, threads: int = 1) -> dict[str, RankedList]:
    """Score every term against every class (one-vs-rest) and sort each class."""
    metric = canonical_metric(metric_id)
    stats = matrix if isinstance(matrix, TermStats) else build_stats(matrix)
    scores = score_all(metric, stats)
    if not np.all(np.isfinite(scores)):
        raise FloatingPointError(f"{metric} produced non-finite scores")
    terms = stats.vocab.terms
    term_order = np.argsort(np.array(terms, dtype=object), kind="stable")

    def one(c: int) -> RankedList:
        return RankedList.from_scores(stats.classes[c], metric, terms, scores[c], term_order)

    if threads == 1:
        lists = [one(c) for c in range(len(stats.classes))]
    else:
        with ThreadPoolExecutor(max_workers=threads or None) as pool:
            lists = list(pool.map(one, range(len(stats.classes))))
    return {rl.class_label: rl for rl in lists}


def select_top_k_union(ranked: Mapping[str, RankedList], k: int) -> SelectedVocabulary:
    """Deduplicated union of every class's first ``k`` terms, ordered by (best rank, term)."""
    if k < 1:
        raise ValueError("k must be positive")
    best: dict[str, int] = {}
    prov: dict[str, set[str]] = {}
    metric = ""
    for label in sorted(ranked):
        rl = ranked[label]
        metric = rl.metric_id
        for r, term in enumerate(rl.top(k), 1):
            if r < best.get(term, r + 1):
                best[term] = r
            prov.setdefault(term, set()).add(label)
    terms = tuple(sorted(best, key=lambda t: (best[t], t)))
    return SelectedVocabulary(k, metric, terms, best, {t: frozenset(prov[t]) for t in terms})


def _check_term(term: str) -> None:
    if "\t" in term or "\n" in term:
        raise ValueError(f"term {term!r} cannot be written to TSV")


def export_ranking(ranked: RankedList | Mapping[str, RankedList] | SelectedVocabulary,
                   path: str | os.PathLike, header_comments: Iterable[str] = ()) -> None:
    """Write a ranking (or several, in class order) or a selected vocabulary as TSV."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in header_comments:
            fh.write(f"# {line}\n")
        if isinstance(ranked, SelectedVocabulary):
            fh.write(SELECTED_HEADER + "\n")
            for t in ranked.terms:
                _check_term(t)
                fh.write(f"{t}\t{ranked.best_rank[t]}\t{','.join(sorted(ranked.provenance.get(t, ())))}\n")
            return
        lists = [ranked] if isinstance(ranked, RankedList) else [ranked[c] for c in sorted(ranked)]
        fh.write(RANKING_HEADER + "\n")
        for rl in lists:
            for r, (t, s) in enumerate(zip(rl.terms, rl.scores), 1):
                _check_term(t)
                fh.write(f"{t}\t{rl.class_label}\t{rl.metric_id}\t{fmt_score(s)}\t{r}\n")


def _data_lines(path):
    with open(path, encoding="utf-8") as fh:
        lines = [l.rstrip("\n") for l in fh if not l.startswith("#")]
    if not lines:
        raise ValueError(f"{path}: missing header")
    return lines[0], lines[1:]


def import_ranking(path: str | os.PathLike) -> dict[str, RankedList]:
    header, rows = _data_lines(path)
    if header != RANKING_HEADER:
        raise ValueError(f"{path}: not a ranking file")
    grouped: dict[str, tuple[str, list[str], list[float]]] = {}
    for line in rows:
        term, label, metric, score, _ = line.split("\t")
        entry = grouped.setdefault(label, (metric, [], []))
        entry[1].append(term)
        entry[2].append(float(score))
    return {c: RankedList(c, m, ts, ss) for c, (m, ts, ss) in grouped.items()}


def import_selected(path: str | os.PathLike, k: int = 0, metric_id: str = "") -> SelectedVocabulary:
    header, rows = _data_lines(path)
    if header != SELECTED_HEADER:
        raise ValueError(f"{path}: not a selected-vocabulary file")
    terms, best, prov = [], {}, {}
    for line in rows:
        term, rank, classes = line.split("\t")
        terms.append(term)
        best[term] = int(rank)
        prov[term] = frozenset(c for c in classes.split(",") if c)
    return SelectedVocabulary(k, metric_id, tuple(terms), best, prov)
