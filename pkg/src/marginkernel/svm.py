"""Linear hinge-loss SVM trained by dual coordinate descent with a duality-gap stop."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numba
import numpy as np

from .errors import DegenerateData, DimensionMismatch, ZeroWeights


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: float
    C: float
    primal: float = float("nan")
    gap: float = float("nan")

    def decision_function(self, features):
        features = np.asarray(features, dtype=float)
        if features.ndim != 2 or features.shape[1] != self.weights.shape[0]:
            raise DimensionMismatch(f"expected {self.weights.shape[0]} feature columns")
        return features @ self.weights + self.bias


@numba.njit(cache=True)
def _dcd_epochs(X, y, C, alpha, w, perm, epochs):
    n, p = X.shape
    for _ in range(epochs):
        for k in range(n):
            i = perm[k]
            qii = 0.0
            dot = 0.0
            for j in range(p):
                qii += X[i, j] * X[i, j]
                dot += w[j] * X[i, j]
            if qii <= 0.0:
                continue
            grad = y[i] * dot - 1.0
            a = alpha[i]
            if (a == 0.0 and grad >= 0.0) or (a == C and grad <= 0.0):
                continue
            new = min(max(a - grad / qii, 0.0), C)
            delta = (new - a) * y[i]
            if delta != 0.0:
                for j in range(p):
                    w[j] += delta * X[i, j]
                alpha[i] = new


def _objectives(X, y, C, alpha, w):
    hinge = np.maximum(0.0, 1.0 - y * (X @ w))
    primal = 0.5 * w @ w + C * hinge.sum()
    dual = alpha.sum() - 0.5 * w @ w
    return primal, dual


def train_linear_svm(features, labels, C=1.0, tol=1e-3, max_epochs=20000, check_every=5, seed=0):
    """Minimize ``0.5 |w|^2 + C sum_i max(0, 1 - y_i (w.x_i + b))``.

    The bias is a constant feature of value 1 and is regularized with ``w``.
    Training stops once ``primal - dual <= tol * (1 + |primal|)``.
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray(labels, dtype=float).ravel()
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise DimensionMismatch("features and labels disagree on n")
    if X.shape[0] < 2 or not (np.any(y == 1) and np.any(y == -1)):
        raise DegenerateData("need at least one sample of each class")
    if C <= 0:
        raise ValueError("C must be positive")
    Xb = np.ascontiguousarray(np.column_stack([X, np.ones(X.shape[0])]))
    n = Xb.shape[0]
    alpha = np.zeros(n)
    w = np.zeros(Xb.shape[1])
    rng = np.random.default_rng(seed)
    epochs = 0
    primal, dual = _objectives(Xb, y, C, alpha, w)
    while primal - dual > tol * (1.0 + abs(primal)) and epochs < max_epochs:
        _dcd_epochs(Xb, y, C, alpha, w, rng.permutation(n), check_every)
        epochs += check_every
        # recompute w from alpha to drop accumulated rounding
        w = Xb.T @ (alpha * y)
        primal, dual = _objectives(Xb, y, C, alpha, w)
    gap = primal - dual
    if gap > tol * (1.0 + abs(primal)):
        warnings.warn(f"SVM did not reach tolerance: gap {gap:.3g} after {epochs} epochs")
    return LinearModel(w[:-1].copy(), float(w[-1]), float(C), float(primal), float(gap))


def predict(model: LinearModel, features) -> np.ndarray:
    """Labels ``sign(w.x + b)`` with ties resolved to +1."""
    return np.where(model.decision_function(features) >= 0, 1.0, -1.0)


def accuracy(model: LinearModel, features, labels) -> float:
    return float(np.mean(predict(model, features) == np.asarray(labels)))


def margin(model: LinearModel, features, labels) -> float:
    """Geometric margin ``min_i y_i (w.x_i + b) / |w|``; negative if any point is misclassified."""
    norm = np.linalg.norm(model.weights)
    if norm == 0:
        raise ZeroWeights("margin is undefined for zero weights")
    return float(np.min(np.asarray(labels) * model.decision_function(features)) / norm)
