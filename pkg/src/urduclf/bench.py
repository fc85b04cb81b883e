"""Experimental protocol: split, rank, select top-k, train, predict, score."""

from __future__ import annotations

import math
import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import Corpus, stratified_split
from .models import train_linear_svm, train_nb
from .models.svm import DEFAULT_C, DEFAULT_MAX_EPOCHS, DEFAULT_TOL
from .rank import METRICS, build_stats, canonical_metric, rank_per_class, select_top_k_union
from .vectorize import DocTermMatrix, apply_tfidf, build_vocabulary, compute_idf, count_matrix

DEFAULT_K = (10, 20, 50, 100, 200, 500, 1000, 2000, 5000)
CLASSIFIERS = ("nb", "svm")
RESULT_HEADER = "metric\tk\tclassifier\tmacro_f1\tmacro_p\tmacro_r\tvocab_size\twall_ms"


@dataclass(frozen=True)
class ConfusionMatrix:
    classes: tuple[str, ...]
    cells: np.ndarray  # cells[i, j]: gold class i predicted as class j

    @classmethod
    def from_labels(cls, gold: Sequence[str], predicted: Sequence[str], classes: Sequence[str]) -> "ConfusionMatrix":
        if len(gold) != len(predicted):
            raise ValueError(f"{len(gold)} gold labels but {len(predicted)} predictions")
        if not gold:
            raise ValueError("nothing to evaluate")
        pos = {c: i for i, c in enumerate(classes)}
        unknown = {l for l in (*gold, *predicted) if l not in pos}
        if unknown:
            raise ValueError(f"unknown labels: {sorted(unknown)}")
        cells = np.zeros((len(classes), len(classes)), dtype=np.int64)
        np.add.at(cells, ([pos[g] for g in gold], [pos[p] for p in predicted]), 1)
        return cls(tuple(classes), cells)

    @property
    def total(self) -> int:
        return int(self.cells.sum())


@dataclass(frozen=True)
class EvalReport:
    classes: tuple[str, ...]
    precision: tuple[float, ...]
    recall: tuple[float, ...]
    f1: tuple[float, ...]
    support: tuple[int, ...]
    confusion: ConfusionMatrix

    @property
    def macro_precision(self) -> float:
        return sum(self.precision) / len(self.classes)

    @property
    def macro_recall(self) -> float:
        return sum(self.recall) / len(self.classes)

    @property
    def macro_f1(self) -> float:
        return sum(self.f1) / len(self.classes)

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.confusion.cells)) / self.confusion.total

    def to_tsv(self) -> str:
        lines = ["class\tprecision\trecall\tf1\tsupport"]
        for row in zip(self.classes, self.precision, self.recall, self.f1, self.support):
            lines.append(f"{row[0]}\t{row[1]:.6f}\t{row[2]:.6f}\t{row[3]:.6f}\t{row[4]}")
        lines.append(f"macro\t{self.macro_precision:.6f}\t{self.macro_recall:.6f}\t{self.macro_f1:.6f}\t{sum(self.support)}")
        return "\n".join(lines) + "\n"


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def evaluate(gold: Sequence[str], predicted: Sequence[str], classes: Sequence[str]) -> EvalReport:
    """Per-class and macro-averaged precision, recall and F1.

    An empty denominator yields 0 (e.g. precision of a class never predicted).
    """
    cm = ConfusionMatrix.from_labels(list(gold), list(predicted), classes)
    tp = np.diag(cm.cells)
    predicted_n = cm.cells.sum(axis=0)
    gold_n = cm.cells.sum(axis=1)
    p = [_ratio(int(a), int(b)) for a, b in zip(tp, predicted_n)]
    r = [_ratio(int(a), int(b)) for a, b in zip(tp, gold_n)]
    f = [2 * pi * ri / (pi + ri) if pi + ri > 0 else 0.0 for pi, ri in zip(p, r)]
    return EvalReport(cm.classes, tuple(p), tuple(r), tuple(f), tuple(int(n) for n in gold_n), cm)


@dataclass(frozen=True)
class SweepConfig:
    metrics: tuple[str, ...] = METRICS
    k_values: tuple[int, ...] = DEFAULT_K
    classifiers: tuple[str, ...] = CLASSIFIERS
    seed: int = 0
    train_fraction: float = 0.7
    alpha: float = 1.0
    C: float = DEFAULT_C
    tol: float = DEFAULT_TOL
    max_epochs: int = DEFAULT_MAX_EPOCHS
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "metrics", tuple(canonical_metric(m) for m in self.metrics))
        object.__setattr__(self, "k_values", tuple(int(k) for k in self.k_values))
        object.__setattr__(self, "classifiers", tuple(c.lower() for c in self.classifiers))
        if not (self.metrics and self.k_values and self.classifiers):
            raise ValueError("sweep needs at least one metric, one k and one classifier")
        if any(k < 1 for k in self.k_values):
            raise ValueError("k values must be positive")
        bad = set(self.classifiers) - set(CLASSIFIERS)
        if bad:
            raise ValueError(f"unknown classifiers: {sorted(bad)}")

    def provenance(self) -> dict[str, str]:
        """Settings that determine the results (thread count excluded)."""
        d = asdict(self)
        d.pop("threads")
        return {k: ",".join(map(str, v)) if isinstance(v, tuple) else str(v) for k, v in d.items()}


@dataclass(frozen=True)
class SweepRow:
    metric: str
    k: int
    classifier: str
    macro_f1: float
    macro_p: float
    macro_r: float
    vocab_size: int
    wall_ms: float
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    rows: tuple[SweepRow, ...]
    n_train: int = 0
    n_test: int = 0
    n_terms: int = 0

    def best_per_metric(self) -> list[SweepRow]:
        best = {}
        for row in self.rows:
            if row.error is not None:
                continue
            cur = best.get(row.metric)
            if cur is None or row.macro_f1 > cur.macro_f1:
                best[row.metric] = row
        return [best[m] for m in self.config.metrics if m in best]


def _fit_predict(classifier: str, train: DocTermMatrix, test: DocTermMatrix, config: SweepConfig) -> list[str]:
    if classifier == "nb":
        return train_nb(train, config.alpha).predict(test.counts)
    weighted = apply_tfidf(train, compute_idf(train), l2_normalize_rows=True)
    model = train_linear_svm(weighted, config.C, config.tol, config.max_epochs, config.seed)
    return model.predict(model.transform(test.counts))


def run_sweep(corpus: Corpus, config: SweepConfig) -> SweepResult:
    """Evaluate every (metric, k, classifier) cell on one stratified split.

    Vocabulary, statistics, rankings, IDF, priors and class weights all come
    from the training half. Rankings are computed once per metric. A failing
    cell is recorded with its error and the sweep carries on.
    """
    if not corpus.is_tokenized:
        raise ValueError("corpus must be preprocessed before a sweep")
    split = stratified_split(corpus, config.train_fraction, config.seed)
    vocab = build_vocabulary(split.train)
    train = count_matrix(split.train, vocab)
    test = count_matrix(split.test, vocab, classes=train.classes)
    gold = list(split.test.labels)
    stats = build_stats(train)

    cells = []
    for metric in config.metrics:
        ranked = rank_per_class(stats, metric)
        for k in config.k_values:
            selected = select_top_k_union(ranked, k).vocabulary
            for clf in config.classifiers:
                cells.append((metric, k, clf, selected))

    def run(cell) -> SweepRow:
        metric, k, clf, selected = cell
        start = time.perf_counter()
        try:
            pred = _fit_predict(clf, train.restrict(selected), test.restrict(selected), config)
            rep = evaluate(gold, pred, train.classes)
        except Exception as exc:  # recorded per cell, never fatal
            return SweepRow(metric, k, clf, math.nan, math.nan, math.nan, len(selected),
                            (time.perf_counter() - start) * 1000, f"{type(exc).__name__}: {exc}")
        return SweepRow(metric, k, clf, rep.macro_f1, rep.macro_precision, rep.macro_recall,
                        len(selected), (time.perf_counter() - start) * 1000)

    if config.threads == 1:
        rows = [run(c) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=config.threads or None) as pool:
            rows = list(pool.map(run, cells))
    return SweepResult(config, tuple(rows), len(split.train), len(split.test), len(vocab))


def run_sweep_seeds(corpus: Corpus, config: SweepConfig, seeds: Iterable[int]) -> list[SweepResult]:
    from dataclasses import replace

    return [run_sweep(corpus, replace(config, seed=s)) for s in seeds]


def _fmt(x: float) -> str:
    return "NA" if math.isnan(x) else f"{x:.6f}"


def result_tsv(result: SweepResult, timings: bool = False, header: Mapping[str, str] | None = None) -> str:
    """Result table as TSV.

    ``wall_ms`` is written only when ``timings`` is set (otherwise ``NA``) so
    that equal seeds give byte-identical files.
    """
    lines = [f"# {k}={v}" for k, v in (header or {}).items()]
    lines.append(RESULT_HEADER)
    for r in result.rows:
        wall = f"{r.wall_ms:.1f}" if timings else "NA"
        lines.append(f"{r.metric}\t{r.k}\t{r.classifier}\t{_fmt(r.macro_f1)}\t{_fmt(r.macro_p)}\t"
                     f"{_fmt(r.macro_r)}\t{r.vocab_size}\t{wall}")
    return "\n".join(lines) + "\n"


def result_markdown(result: SweepResult, header: Mapping[str, str] | None = None) -> str:
    cfg = result.config
    out = ["# Feature selection sweep", "", "## Configuration", "", "```"]
    for k, v in {**cfg.provenance(), **(header or {})}.items():
        out.append(f"{k} = {v}")
    out += ["```", "",
            f"Train documents: {result.n_train}; test documents: {result.n_test}; "
            f"training vocabulary: {result.n_terms} terms.", "",
            "## Best test point per metric", "",
            "| metric | best k | classifier | macro-F1 |", "|---|---:|---|---:|"]
    for r in result.best_per_metric():
        out.append(f"| {r.metric} | {r.k} | {r.classifier} | {r.macro_f1:.4f} |")
    out += ["", "## All cells", "", "| metric | k | classifier | macro-F1 | macro-P | macro-R | vocab |",
            "|---|---:|---|---:|---:|---:|---:|"]
    for r in result.rows:
        out.append(f"| {r.metric} | {r.k} | {r.classifier} | {_fmt(r.macro_f1)} | {_fmt(r.macro_p)} | "
                   f"{_fmt(r.macro_r)} | {r.vocab_size} |")
    failed = [r for r in result.rows if r.error]
    if failed:
        out += ["", "## Failed cells", ""]
        out += [f"- {r.metric} k={r.k} {r.classifier}: {r.error}" for r in failed]
    return "\n".join(out) + "\n"


def render_report(result: SweepResult, format: str, path: str | os.PathLike,
                  header: Mapping[str, str] | None = None, timings: bool = False) -> None:
    if not result.rows:
        raise ValueError("empty sweep result")
    if format == "tsv":
        text = result_tsv(result, timings, header)
    elif format == "markdown":
        text = result_markdown(result, header)
    else:
        raise ValueError(f"unknown report format {format!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def aggregate_tsv(results: Sequence[SweepResult], header: Mapping[str, str] | None = None) -> str:
    """Mean and sample standard deviation of each cell across seeds."""
    lines = [f"# {k}={v}" for k, v in (header or {}).items()]
    lines.append("metric\tk\tclassifier\tmacro_f1_mean\tmacro_f1_std\tn_seeds")
    for cells in zip(*(r.rows for r in results)):
        vals = [c.macro_f1 for c in cells if not math.isnan(c.macro_f1)]
        mean = statistics.fmean(vals) if vals else math.nan
        std = statistics.stdev(vals) if len(vals) > 1 else 0.0 if vals else math.nan
        c0 = cells[0]
        lines.append(f"{c0.metric}\t{c0.k}\t{c0.classifier}\t{_fmt(mean)}\t{_fmt(std)}\t{len(vals)}")
    return "\n".join(lines) + "\n"
