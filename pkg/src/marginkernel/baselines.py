"""RBF random Fourier features baseline."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .fourier import feature_map
from .langevin import median_heuristic


@dataclass(frozen=True)
class RbfParams:
    m: int = 100
    sigma: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.sigma is not None and self.sigma <= 0:
            raise ValueError("sigma must be positive")


def rbf_frequencies(d, params: RbfParams, sigma):
    rng = np.random.default_rng(params.seed)
    return rng.standard_normal((params.m, d)) / sigma


def rbf_random_features(data: Dataset, params: RbfParams = RbfParams(), points=None):
    """Cos/sin features for ``m`` frequencies drawn from N(0, I / sigma^2).

    ``Phi @ Phi.T / m`` approximates ``exp(-|x - x'|^2 / (2 sigma^2))``. The
    bandwidth defaults to the median heuristic on ``data``; pass ``points`` to
    featurize other samples with the same frequencies.

    Returns
    -------
    features : ndarray, shape (n, 2m)
    omegas : ndarray, shape (m, d)
    """
    sigma = params.sigma if params.sigma is not None else median_heuristic(data)
    omegas = rbf_frequencies(data.d, params, sigma)
    target = data.points if points is None else points
    return feature_map(target, omegas), omegas
