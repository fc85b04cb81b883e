"""The ten filter metrics, vectorized over one-vs-rest statistics.

Each scorer takes an object exposing ``tp, fn, fp, tn, npos, nneg,
pos_occurrences, hist_gap`` as broadcastable arrays (a :class:`TermStats`, or
the one-element batch built by :func:`metric_score`) and returns float scores.
Rates that end up in a denominator or a normal quantile are clamped to
``[EPS, 1 - EPS]``.
"""

from __future__ import annotations

from types import SimpleNamespace
from typing import Callable

import numpy as np

from .normal import inverse_normal_cdf
from .stats import TermClassStats

EPS = 0.0005

METRICS = ("ACC2", "NDM", "MMR", "RDC", "IG", "CHISQ", "OR", "BNS", "GINI", "POIS")


def _rates(s):
    tpr = s.tp / s.npos
    fpr = s.fp / s.nneg
    return tpr, fpr


def _clamped(s):
    tpr, fpr = _rates(s)
    return np.clip(tpr, EPS, 1 - EPS), np.clip(fpr, EPS, 1 - EPS)


def acc2(s):
    tpr, fpr = _rates(s)
    return np.abs(tpr - fpr)


def ndm(s):
    tprc, fprc = _clamped(s)
    return acc2(s) / np.minimum(tprc, fprc)


def mmr(s):
    tprc, fprc = _clamped(s)
    return np.maximum(tprc, fprc) * acc2(s) / np.minimum(tprc, fprc)


def rdc(s):
    return np.asarray(s.hist_gap, dtype=np.float64) + np.zeros(np.shape(s.tp))


def _mi_cell(cell, row, col, n):
    cell = np.asarray(cell, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = cell / n * np.log(cell * n / (row * col))
    return np.where(cell > 0, val, 0.0)


def ig(s):
    n = (s.npos + s.nneg).astype(np.float64)
    with_t = s.tp + s.fp
    without_t = s.fn + s.tn
    return (_mi_cell(s.tp, with_t, s.npos, n) + _mi_cell(s.fp, with_t, s.nneg, n)
            + _mi_cell(s.fn, without_t, s.npos, n) + _mi_cell(s.tn, without_t, s.nneg, n))


def chisq(s):
    tp, fn, fp, tn = (np.asarray(a, dtype=np.float64) for a in (s.tp, s.fn, s.fp, s.tn))
    n = tp + fn + fp + tn
    denom = (tp + fp) * (fn + tn) * (tp + fn) * (fp + tn)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = n * (tp * tn - fp * fn) ** 2 / denom
    return np.where(denom > 0, val, 0.0)


def odds_ratio(s):
    return np.log((s.tp + 0.5) * (s.tn + 0.5) / ((s.fp + 0.5) * (s.fn + 0.5)))


def bns(s):
    tprc, fprc = _clamped(s)
    shape = np.broadcast(tprc, fprc).shape
    z_tp = inverse_normal_cdf(np.broadcast_to(tprc, shape).ravel())
    z_fp = inverse_normal_cdf(np.broadcast_to(fprc, shape).ravel())
    return np.abs(z_tp - z_fp).reshape(shape)


def gini(s):
    tp = np.asarray(s.tp, dtype=np.float64)
    flagged = tp + s.fp
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (tp / s.npos) ** 2 * (tp / flagged) ** 2
    return np.where(flagged > 0, val, 0.0)


def poisson(s):
    """Standardized gap between observed and Poisson-expected class document frequency."""
    lam = s.pos_occurrences / s.npos
    miss = np.exp(-lam)
    expected = s.npos * (1.0 - miss)
    var = expected * miss
    with np.errstate(divide="ignore", invalid="ignore"):
        z = (s.tp - expected) / np.sqrt(var)
    return np.where(var > 0, np.abs(z), 0.0)


SCORERS: dict[str, Callable] = {
    "ACC2": acc2,
    "NDM": ndm,
    "MMR": mmr,
    "RDC": rdc,
    "IG": ig,
    "CHISQ": chisq,
    "OR": odds_ratio,
    "BNS": bns,
    "GINI": gini,
    "POIS": poisson,
}


def canonical_metric(metric_id: str) -> str:
    key = metric_id.strip().upper()
    if key == "POISON":
        key = "POIS"
    if key not in SCORERS:
        raise ValueError(f"unknown metric {metric_id!r}; expected one of {', '.join(METRICS)}")
    return key


def score_all(metric_id: str, stats) -> np.ndarray:
    return np.asarray(SCORERS[canonical_metric(metric_id)](stats), dtype=np.float64)


def metric_score(metric_id: str, stats: TermClassStats) -> float:
    t = stats.table
    batch = SimpleNamespace(
        tp=np.array([t.tp]), fn=np.array([t.fn]), fp=np.array([t.fp]), tn=np.array([t.tn]),
        npos=np.array([t.npos]), nneg=np.array([t.nneg]),
        pos_occurrences=np.array([stats.pos_occurrences]),
        hist_gap=np.array([stats.hist_gap]),
    )
    return float(score_all(metric_id, batch)[0])
