"""Brute-force reference scores, written independently of the package.

Scalar pure-Python evaluation from raw counts and count histograms. Uses the
standard library's ``NormalDist`` for the normal quantile.
"""

import math
from statistics import NormalDist

EPS = 0.0005
_Z = NormalDist()


def clamp(x):
    return min(max(x, EPS), 1 - EPS)


def score(metric, tp, fn, fp, tn, hist_pos=None, hist_neg=None):
    if hist_pos is None:
        hist_pos = {1: tp} if tp else {}
    if hist_neg is None:
        hist_neg = {1: fp} if fp else {}
    npos, nneg = tp + fn, fp + tn
    n = npos + nneg
    tpr, fpr = tp / npos, fp / nneg
    a, b = clamp(tpr), clamp(fpr)
    if metric == "ACC2":
        return abs(tpr - fpr)
    if metric == "NDM":
        return abs(tpr - fpr) / min(a, b)
    if metric == "MMR":
        return max(a, b) * abs(tpr - fpr) / min(a, b)
    if metric == "RDC":
        total = 0.0
        for x in set(hist_pos) | set(hist_neg):
            total += abs(hist_pos.get(x, 0) / npos - hist_neg.get(x, 0) / nneg) / x
        return total
    if metric == "IG":
        total = 0.0
        joint = {(1, 1): tp, (1, 0): fp, (0, 1): fn, (0, 0): tn}
        p_t = {1: (tp + fp) / n, 0: (fn + tn) / n}
        p_c = {1: npos / n, 0: nneg / n}
        for (t, c), cnt in joint.items():
            if cnt:
                p = cnt / n
                total += p * math.log(p / (p_t[t] * p_c[c]))
        return total
    if metric == "CHISQ":
        den = (tp + fp) * (fn + tn) * npos * nneg
        if den == 0:
            return 0.0
        return n * (tp * tn - fp * fn) ** 2 / den
    if metric == "OR":
        return math.log((tp + 0.5) * (tn + 0.5) / ((fp + 0.5) * (fn + 0.5)))
    if metric == "BNS":
        return abs(_Z.inv_cdf(a) - _Z.inv_cdf(b))
    if metric == "GINI":
        if tp + fp == 0:
            return 0.0
        return (tp / npos) ** 2 * (tp / (tp + fp)) ** 2
    if metric == "POIS":
        occ = sum(x * k for x, k in hist_pos.items())
        lam = occ / npos
        if lam == 0:
            return 0.0
        e = math.exp(-lam)
        expected = npos * (1 - e)
        var = npos * (1 - e) * e
        if var <= 0:
            return 0.0
        return abs((tp - expected) / math.sqrt(var))
    raise KeyError(metric)


def grid(max_count=6):
    """Every table with cells in 0..max_count and both classes non-empty."""
    r = range(max_count + 1)
    for tp in r:
        for fn in r:
            for fp in r:
                for tn in r:
                    if tp + fn >= 1 and fp + tn >= 1:
                        yield tp, fn, fp, tn
