"""One-vs-rest linear SVM trained by dual coordinate descent.

Each binary problem is the L2-regularized hinge-loss SVM

    min_w  1/2 |w|^2 + sum_i C_i max(0, 1 - y_i w.x_i)

solved in the dual, one variable at a time (Hsieh et al., 2008). The bias is
an extra feature fixed at 1, so it is regularized like any other weight.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numba
import numpy as np
import scipy.sparse as sp

from ..vectorize import Vocabulary, WeightedMatrix, l2_normalize

DEFAULT_C = 1.0
DEFAULT_TOL = 1e-4
DEFAULT_MAX_EPOCHS = 1000


@numba.njit(cache=True, nogil=True)
def _dcd_pass(indptr, indices, data, qdiag, y, cost, alpha, w, order, update):
    """One sweep over ``order``; returns the largest projected-gradient magnitude.

    ``w`` carries the bias in its last slot. With ``update`` false nothing is
    modified, which gives an exact KKT check at the current point.
    """
    bias = w.shape[0] - 1
    worst = 0.0
    for i in order:
        lo, hi = indptr[i], indptr[i + 1]
        margin = w[bias]
        for p in range(lo, hi):
            margin += w[indices[p]] * data[p]
        g = y[i] * margin - 1.0
        a = alpha[i]
        if a <= 0.0:
            pg = min(g, 0.0)
        elif a >= cost[i]:
            pg = max(g, 0.0)
        else:
            pg = g
        if abs(pg) > worst:
            worst = abs(pg)
        if update and pg != 0.0:
            new = min(max(a - g / qdiag[i], 0.0), cost[i])
            step = (new - a) * y[i]
            alpha[i] = new
            for p in range(lo, hi):
                w[indices[p]] += step * data[p]
            w[bias] += step
    return worst


@dataclass
class DualCDResult:
    """Outcome of one binary dual coordinate descent run."""

    w: np.ndarray          # feature weights followed by the bias
    alpha: np.ndarray
    cost: np.ndarray
    objective: list[float] = field(default_factory=list)  # dual objective after each epoch
    violation: float = np.inf
    epochs: int = 0
    converged: bool = False


def dual_objective(alpha: np.ndarray, w: np.ndarray) -> float:
    return float(alpha.sum() - 0.5 * w @ w)


def dual_cd(X: sp.csr_matrix, y: np.ndarray, cost: np.ndarray, tol: float = DEFAULT_TOL,
            max_epochs: int = DEFAULT_MAX_EPOCHS, seed: int = 0) -> DualCDResult:
    """Solve one binary problem with labels ``y`` in {-1, +1} and per-instance costs."""
    X = sp.csr_matrix(X, dtype=np.float64)
    n, d = X.shape
    y = np.asarray(y, dtype=np.float64)
    cost = np.asarray(cost, dtype=np.float64)
    qdiag = np.asarray(X.multiply(X).sum(axis=1)).ravel() + 1.0
    indptr = X.indptr.astype(np.int64)
    indices = X.indices.astype(np.int64)
    alpha = np.zeros(n)
    w = np.zeros(d + 1)
    rng = np.random.Generator(np.random.PCG64(seed))
    res = DualCDResult(w, alpha, cost)
    for epoch in range(1, max_epochs + 1):
        order = rng.permutation(n).astype(np.int64)
        worst = _dcd_pass(indptr, indices, X.data, qdiag, y, cost, alpha, w, order, True)
        res.objective.append(dual_objective(alpha, w))
        res.epochs = epoch
        if worst < tol:
            # confirm at the final point, not during the sweep
            res.violation = _dcd_pass(indptr, indices, X.data, qdiag, y, cost, alpha, w, order, False)
            if res.violation < tol:
                res.converged = True
                break
    else:
        res.violation = _dcd_pass(indptr, indices, X.data, qdiag, y, cost, alpha, w,
                                  np.arange(n, dtype=np.int64), False)
    return res


def balanced_class_weight(y: np.ndarray, n_classes: int) -> np.ndarray:
    """``N / (K * N_c)`` per class."""
    sizes = np.bincount(y, minlength=n_classes).astype(np.float64)
    if (sizes == 0).any():
        raise ValueError("every class needs at least one training document")
    return len(y) / (n_classes * sizes)


@dataclass(frozen=True, eq=False)
class LinearModel:
    classes: tuple[str, ...]
    coef: np.ndarray        # (K, V)
    intercept: np.ndarray   # (K,)
    C: float
    class_weight: np.ndarray
    tol: float
    max_epochs: int
    seed: int
    vocab: Vocabulary
    idf: np.ndarray | None = None
    row_normalized: bool = True
    converged: tuple[bool, ...] = ()
    epochs: tuple[int, ...] = ()

    model_type = "svm"

    def transform(self, counts) -> sp.csr_matrix:
        """Apply the TF-IDF weighting the model was trained on to raw counts."""
        X = sp.csr_matrix(counts, dtype=np.float64)
        if self.idf is not None:
            X = sp.csr_matrix(X @ sp.diags(self.idf))
        return l2_normalize(X) if self.row_normalized else X

    def decision_function(self, X) -> np.ndarray:
        if sp.issparse(X):
            X = sp.csr_matrix(X, dtype=np.float64)
        else:
            X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.coef.shape[1]:
            raise ValueError(f"expected {self.coef.shape[1]} features, got {X.shape[1]}")
        return np.asarray(X @ self.coef.T) + self.intercept

    def predict_index(self, X) -> np.ndarray:
        return np.argmax(self.decision_function(X), axis=1)

    def predict(self, X) -> list[str]:
        return [self.classes[i] for i in self.predict_index(X)]


def train_linear_svm(matrix: WeightedMatrix, C: float = DEFAULT_C, tol: float = DEFAULT_TOL,
                     max_epochs: int = DEFAULT_MAX_EPOCHS, seed: int = 0, threads: int = 1) -> LinearModel:
    """Train one balanced-cost binary SVM per class.

    The binary problem for class ``c`` uses seed ``seed ^ c``. Non-convergence
    is reported in ``LinearModel.converged`` rather than raised.
    """
    if not C > 0:
        raise ValueError("C must be positive")
    X = sp.csr_matrix(matrix.weights, dtype=np.float64)
    if not np.all(np.isfinite(X.data)):
        raise ValueError("feature matrix has non-finite entries")
    y = matrix.label_index
    K = len(matrix.classes)
    if np.count_nonzero(np.bincount(y, minlength=K)) < 2:
        raise ValueError("SVM needs at least 2 classes with documents")
    weights = balanced_class_weight(y, K)
    cost = C * weights[y]

    def fit(c: int) -> DualCDResult:
        return dual_cd(X, np.where(y == c, 1.0, -1.0), cost, tol, max_epochs, seed ^ c)

    if threads == 1:
        results = [fit(c) for c in range(K)]
    else:
        with ThreadPoolExecutor(max_workers=threads or None) as pool:
            results = list(pool.map(fit, range(K)))
    coef = np.vstack([r.w[:-1] for r in results])
    intercept = np.array([r.w[-1] for r in results])
    return LinearModel(
        matrix.classes, coef, intercept, float(C), weights, tol, max_epochs, seed, matrix.vocab,
        matrix.idf, matrix.row_normalized,
        tuple(r.converged for r in results), tuple(r.epochs for r in results),
    )


def predict_linear(model: LinearModel, doc_vector) -> tuple[str, np.ndarray]:
    """Label of one weighted document vector plus its per-class margins."""
    margins = model.decision_function(doc_vector)[0]
    return model.classes[int(np.argmax(margins))], margins
