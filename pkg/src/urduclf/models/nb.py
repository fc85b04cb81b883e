"""Multinomial Naive Bayes on raw term counts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.special import logsumexp

from ..vectorize import DocTermMatrix, Vocabulary


@dataclass(frozen=True, eq=False)
class NBModel:
    classes: tuple[str, ...]
    log_prior: np.ndarray       # (K,)
    log_likelihood: np.ndarray  # (K, V)
    alpha: float
    vocab: Vocabulary

    model_type = "nb"

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = _as_rows(X, len(self.vocab))
        return np.asarray(X @ self.log_likelihood.T) + self.log_prior

    def log_posterior(self, X) -> np.ndarray:
        """Normalized per-class log-posteriors, one row per document."""
        joint = self.joint_log_likelihood(X)
        return joint - logsumexp(joint, axis=1, keepdims=True)

    def predict_index(self, X) -> np.ndarray:
        return np.argmax(self.joint_log_likelihood(X), axis=1)

    def predict(self, X) -> list[str]:
        return [self.classes[i] for i in self.predict_index(X)]


def _as_rows(X, n_features: int):
    if sp.issparse(X):
        X = sp.csr_matrix(X, dtype=np.float64)
    else:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != n_features:
        raise ValueError(f"expected {n_features} features, got {X.shape[1]}")
    return X


def train_nb(matrix: DocTermMatrix, alpha: float = 1.0) -> NBModel:
    """Fit class priors from training frequencies and Laplace-smoothed term likelihoods."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    y = matrix.label_index
    K = len(matrix.classes)
    class_sizes = np.bincount(y, minlength=K)
    if np.count_nonzero(class_sizes) < 2:
        raise ValueError("Naive Bayes needs at least 2 classes with documents")
    onehot = sp.csr_matrix((np.ones(len(y)), (y, np.arange(len(y)))), shape=(K, len(y)))
    term_counts = np.asarray((onehot @ sp.csr_matrix(matrix.counts, dtype=np.float64)).todense())
    smoothed = term_counts + alpha
    log_likelihood = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
    with np.errstate(divide="ignore"):
        log_prior = np.log(class_sizes) - np.log(class_sizes.sum())
    return NBModel(matrix.classes, log_prior, log_likelihood, float(alpha), matrix.vocab)


def predict_nb(model: NBModel, doc_counts) -> tuple[str, np.ndarray]:
    """Label of one document plus its per-class log-posterior.

    Ties go to the earlier class.
    """
    joint = model.joint_log_likelihood(doc_counts)
    label = model.classes[int(np.argmax(joint[0]))]
    return label, (joint - logsumexp(joint, axis=1, keepdims=True))[0]
