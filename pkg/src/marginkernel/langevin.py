"""Parallel-chain Langevin ascent on the reweighted Fourier potential."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from .dataset import Dataset
from .errors import DegenerateData, DimensionMismatch
from .fourier import potential_batch

MEDIAN_EXACT_LIMIT = 2000


@dataclass(frozen=True)
class LangevinParams:
    """Parameters of the peak finder.

    ``diffusion_rate`` and ``temperature`` default to ``None``, meaning they are
    tuned from the gradient magnitudes of the initial batch of chains.
    """

    tau: int = 100
    diffusion_rate: float | None = None
    temperature: float | None = None
    chains: int = 500
    init_variance_scale: float = 1.5
    top_k: int = 1
    clip_radius: float | None = None
    step_fraction: float = 0.5
    noise_fraction: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.tau < 1 or self.chains < 1:
            raise ValueError("tau and chains must be >= 1")
        if not 1 <= self.top_k <= self.chains * (self.tau + 1):
            raise ValueError("top_k out of range")
        if self.init_variance_scale <= 0:
            raise ValueError("init_variance_scale must be positive")
        if self.diffusion_rate is not None and self.diffusion_rate < 0:
            raise ValueError("diffusion_rate must be nonnegative")
        if self.temperature is not None and self.temperature < 0:
            raise ValueError("temperature must be nonnegative")
        if self.clip_radius is not None and self.clip_radius <= 0:
            raise ValueError("clip_radius must be positive")


def median_heuristic(data: Dataset) -> float:
    """Median pairwise Euclidean distance.

    Exact for ``n <= 2000``; larger sets use 2000 points drawn with seed 0.
    """
    if data.n < 2:
        raise DegenerateData("median heuristic needs at least two points")
    pts = data.points
    if data.n > MEDIAN_EXACT_LIMIT:
        idx = np.random.default_rng(0).choice(data.n, MEDIAN_EXACT_LIMIT, replace=False)
        pts = pts[idx]
    dist = pdist(pts)
    if not np.any(dist > 0):
        raise DegenerateData("all points coincide")
    return float(np.median(dist))


def chain_normals(seed, chains, count, d, stream=0):
    """Standard normals of shape ``(count, chains, d)``.

    Chain ``c`` draws from its own Philox stream keyed by ``(seed, c, stream)``.
    """
    out = np.empty((count, chains, d))
    for c in range(chains):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, c, stream])))
        out[:, c, :] = rng.standard_normal((count, d))
    return out


def init_chains(data: Dataset, params: LangevinParams, sigma=None) -> np.ndarray:
    """Initial frequencies ~ N(0, (init_variance_scale / sigma^2) I), one row per chain."""
    if sigma is None:
        sigma = median_heuristic(data)
    z = chain_normals(params.seed, params.chains, 1, data.d)[0]
    return z * np.sqrt(params.init_variance_scale) / sigma


class _FastPotential:
    """Single-precision evaluator of the potential used inside the chain loop.

    Search decisions tolerate ~1e-6 relative error; reported values are
    always re-evaluated in double precision.
    """

    def __init__(self, data: Dataset, alpha):
        w = data.labels * alpha
        self.x = data.points.astype(np.float32)
        self.w = w.astype(np.float32)
        self.wx = (data.points * w[:, None]).astype(np.float32)

    def __call__(self, omegas, with_grad):
        phase = omegas.astype(np.float32) @ self.x.T
        cos, sin = np.cos(phase), np.sin(phase)
        c = (cos @ self.w).astype(np.float64)
        s = (sin @ self.w).astype(np.float64)
        values = c * c + s * s
        if not with_grad:
            return values, None
        grads = 2.0 * (s[:, None] * (cos @ self.wx) - c[:, None] * (sin @ self.wx))
        return values, grads


def _project_ball(omegas, radius):
    norms = np.linalg.norm(omegas, axis=1, keepdims=True)
    return np.where(norms > radius, omegas * (radius / np.maximum(norms, 1e-300)), omegas)


def _landscape_scales(data: Dataset, alpha, sigma, params: LangevinParams):
    """Second moment of the weighted data and the default per-step noise std."""
    w = np.abs(data.labels * np.asarray(alpha, float))
    spread = float(w @ np.sum(data.points**2, axis=1)) / max(float(w.sum()), 1e-300)
    noise = params.noise_fraction * np.sqrt(params.init_variance_scale) / sigma
    return spread, noise


def find_peak(data: Dataset, alpha, params: LangevinParams = LangevinParams(), sigma=None, init=None):
    """Langevin search for peaks of ``v_alpha``.

    Runs ``params.chains`` chains for ``params.tau`` steps of
    ``w <- w + zeta grad v(w) + sqrt(2 xi / zeta) z`` and keeps the best
    visited point of every chain. The ``top_k`` best chain optima are returned
    (as ``(omega, value)`` pairs, value descending); near-identical or mirrored
    (``-omega``) points are reported once. The chains run in single precision;
    returned values are exact double-precision potentials.

    Parameters
    ----------
    sigma : float, optional
        RBF bandwidth for initialization; the median heuristic by default.
    init : ndarray, optional
        Explicit ``(chains, d)`` starting points.
    """
    alpha = np.asarray(alpha, dtype=float).ravel()
    if alpha.shape[0] != data.n:
        raise DimensionMismatch(f"alpha has length {alpha.shape[0]}, expected {data.n}")
    if np.any(alpha < 0) or not np.any(alpha > 0):
        raise DegenerateData("alpha must be nonnegative and not all zero")
    if sigma is None:
        sigma = median_heuristic(data)
    if init is None:
        omega = init_chains(data, params, sigma)
    else:
        omega = np.array(init, dtype=float)
        if omega.shape != (params.chains, data.d):
            raise DimensionMismatch("init must have shape (chains, d)")
    if params.clip_radius is not None:
        omega = _project_ball(omega, params.clip_radius)

    evaluate = _FastPotential(data, alpha)
    values, grads = evaluate(omega, with_grad=True)
    best_val = values.copy()
    best_omega = omega.copy()
    spread, noise_std = _landscape_scales(data, alpha, sigma, params)
    noise = chain_normals(params.seed, params.chains, params.tau, data.d, stream=1)
    for t in range(params.tau):
        zeta, xi = params.diffusion_rate, params.temperature
        if zeta is None:
            top = float(best_val.max())
            zeta = params.step_fraction / (top * spread) if top > 0 and spread > 0 else 0.0
        if xi is None:
            xi = zeta * noise_std**2 / 2.0
        step = zeta * grads
        if zeta > 0 and xi > 0:
            step = step + np.sqrt(2.0 * xi / zeta) * noise[t]
        omega = omega + step
        if params.clip_radius is not None:
            omega = _project_ball(omega, params.clip_radius)
        values, grads = evaluate(omega, with_grad=t + 1 < params.tau)
        better = values > best_val
        best_val[better] = values[better]
        best_omega[better] = omega[better]

    best_val = potential_batch(data, alpha, best_omega)[0]
    order = np.argsort(-best_val, kind="stable")
    picked = []
    for c in order:
        cand = best_omega[c]
        if any(min(np.linalg.norm(cand - p), np.linalg.norm(cand + p)) <= 1e-9 for p, _ in picked):
            continue
        picked.append((cand.copy(), float(best_val[c])))
        if len(picked) == params.top_k:
            break
    return picked
