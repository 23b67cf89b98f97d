"""No-regret min-max dynamics between the SVM dual and a Fourier peak finder.

The alpha-player runs projected online gradient ascent on the dual SVM
objective ``F(alpha, lambda) = 1.alpha - 0.5 * sum_atoms w v_alpha(mode)``;
the kernel player answers every alpha with a best-response mode.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .dataset import Dataset, Geometry
from .errors import DegenerateData, DimensionMismatch
from .fourier import DualMeasure, alignment, feature_map
from .langevin import LangevinParams, find_peak, median_heuristic
from .spherical import DEFAULT_ELL_MAX, canonical, enumerate_max, harmonic_features, harmonic_table

log = logging.getLogger(__name__)

PROJECTION_PASSES = 10
PROJECTION_TOL = 1e-9


def dual_objective(data: Dataset, alpha, measure: DualMeasure) -> float:
    alpha = np.asarray(alpha, dtype=float).ravel()
    if alpha.shape[0] != data.n:
        raise DimensionMismatch(f"alpha has length {alpha.shape[0]}, expected {data.n}")
    return float(alpha.sum() - 0.5 * alignment(data, alpha, measure))


def dual_gradient(alpha, labels, phi_t) -> np.ndarray:
    """``grad_alpha F(alpha, delta_w + delta_-w) = 1 - 2 Y Re(<phi, Y alpha> conj(phi))``.

    ``phi_t`` holds the complex basis function of the mode at every sample.
    """
    alpha = np.asarray(alpha, dtype=float).ravel()
    labels = np.asarray(labels, dtype=float).ravel()
    phi_t = np.asarray(phi_t).ravel()
    if not alpha.shape == labels.shape == phi_t.shape:
        raise DimensionMismatch("alpha, labels and phi_t must have equal length")
    inner = np.sum(labels * alpha * phi_t)
    return 1.0 - 2.0 * labels * np.real(inner * np.conj(phi_t))


def project_feasible(alpha, labels, C, passes=PROJECTION_PASSES, tol=None, max_passes=100_000) -> np.ndarray:
    """Alternating projection onto ``{0 <= alpha <= C, y.alpha = 0}``.

    Each pass clips to the box, then projects onto the hyperplane, so the
    result lies exactly on the hyperplane. With ``tol`` set, passes continue
    beyond ``passes`` until the box violation is at most ``tol * C``.
    """
    alpha = np.array(alpha, dtype=float).ravel()
    labels = np.asarray(labels, dtype=float).ravel()
    if alpha.shape != labels.shape:
        raise DimensionMismatch("alpha and labels must have equal length")
    if passes < 1:
        raise ValueError("passes must be >= 1")
    n = alpha.shape[0]
    done = 0
    while True:
        np.clip(alpha, 0.0, C, out=alpha)
        alpha -= (labels @ alpha / n) * labels
        done += 1
        if done < passes:
            continue
        if tol is None or done >= max_passes or box_violation(alpha, C) <= tol * C:
            return alpha


def box_violation(alpha, C) -> float:
    return float(max(0.0, -alpha.min(), alpha.max() - C))


def regret_constants(n, C):
    """Diameter bound ``D = C sqrt(n)`` and Lipschitz bound ``G = (1 + 2nC) sqrt(n)``.

    ``|<phi, Y alpha>| <= sum(alpha) <= nC`` bounds each gradient coordinate
    by ``1 + 2nC``.
    """
    return C * np.sqrt(n), (1 + 2 * n * C) * np.sqrt(n)


@dataclass
class BoostTrace:
    """Per-round record: mode, peak value ``v_t``, ``f_t(alpha_t)`` and step size."""

    modes: list = field(default_factory=list)
    values: list = field(default_factory=list)
    objectives: list = field(default_factory=list)
    steps: list = field(default_factory=list)

    def __len__(self):
        return len(self.values)

    def append(self, mode, value, objective, step):
        self.modes.append(mode)
        self.values.append(float(value))
        self.objectives.append(float(objective))
        self.steps.append(float(step))


@dataclass
class LearnedKernel:
    """Result of :func:`boost`.

    ``modes`` are the distinct atoms in first-seen order and ``counts`` how many
    rounds selected each; the measure gives atom ``j`` weight ``counts[j] / T``.
    """

    modes: np.ndarray
    counts: np.ndarray
    geometry: Geometry
    trace: BoostTrace
    alpha: np.ndarray
    C: float

    @property
    def rounds(self) -> int:
        return int(self.counts.sum())

    @property
    def spherical(self) -> bool:
        return self.geometry is Geometry.SPHERE

    @property
    def measure(self) -> DualMeasure:
        return DualMeasure(self.modes, self.counts / self.counts.sum(), self.spherical)

    def transform(self, points) -> np.ndarray:
        """Explicit features; ``transform(x) @ transform(x2).T / T`` is the learned Gram matrix."""
        if self.spherical:
            return harmonic_features(points, self.modes, np.sqrt(self.counts))
        return feature_map(points, np.repeat(self.modes, self.counts.astype(int), axis=0))


def _round_seed(seed, r):
    return int(np.random.SeedSequence([seed, r, 7]).generate_state(1)[0])


def boost(
    data: Dataset,
    C=1.0,
    T=100,
    params: LangevinParams | None = None,
    ell_max=DEFAULT_ELL_MAX,
    step_multiplier=1.0,
    callback=None,
):
    """Learn a margin-maximizing kernel by no-regret dynamics.

    Euclidean data uses Langevin peak finding (``params``); sphere data
    enumerates all harmonics up to ``ell_max``. With ``params.top_k > 1`` every
    Langevin call supplies up to ``top_k`` modes, each counted as one round.

    Parameters
    ----------
    data : Dataset
    C : float
        Box constraint of the SVM dual.
    T : int
        Number of rounds (modes).
    step_multiplier : float
        Scales the step size ``eta_t = D / (G sqrt(t))``.
    callback : callable, optional
        Called as ``callback(t, alpha)`` after every round.

    Returns
    -------
    kernel : LearnedKernel
    features : ndarray
        Training features ``kernel.transform(data)``.
    """
    if data.n < 2 or not (np.any(data.labels == 1) and np.any(data.labels == -1)):
        raise DegenerateData("boosting needs both classes present")
    if T < 1 or C <= 0:
        raise ValueError("need T >= 1 and C > 0")
    params = params or LangevinParams()
    y = data.labels
    D, G = regret_constants(data.n, C)
    alpha = project_feasible(np.full(data.n, C / 2.0), y, C, tol=PROJECTION_TOL)
    spherical = data.geometry is Geometry.SPHERE
    if spherical:
        table = harmonic_table(data.points, ell_max)
    else:
        sigma = median_heuristic(data)

    trace = BoostTrace()
    modes, counts, slot = [], [], {}
    t = 0
    call = 0
    while t < T:
        if spherical:
            index, _ = enumerate_max(data, alpha, ell_max, table=table)
            batch = [index]
        else:
            # clip the ~1e-9 C box slack left by the projection
            peaks = find_peak(data, np.clip(alpha, 0.0, None), replace(params, seed=_round_seed(params.seed, call)), sigma=sigma)
            batch = [om for om, _ in peaks][: T - t]
        call += 1
        for mode in batch:
            t += 1
            if spherical:
                ell, m = mode
                phi = table[:, ell * ell + ell + m]
                key = canonical(mode)
            else:
                phi = np.exp(1j * (data.points @ mode))
                key = None
            s = np.sum(y * alpha * phi)
            value = float(abs(s) ** 2)
            grad = 1.0 - 2.0 * y * np.real(s * np.conj(phi))
            eta = step_multiplier * D / (G * np.sqrt(t))
            trace.append(mode, value, alpha.sum() - value, eta)
            if key is not None and key in slot:
                counts[slot[key]] += 1
            else:
                if key is not None:
                    slot[key] = len(modes)
                modes.append(mode)
                counts.append(1)
            alpha = project_feasible(alpha + eta * grad, y, C, tol=PROJECTION_TOL)
            if callback is not None:
                callback(t, alpha)
        if t % 50 == 0 or t == T:
            log.debug("round %d: v=%.4g", t, trace.values[-1])

    kernel = LearnedKernel(
        modes=np.array(modes, dtype=int if spherical else float),
        counts=np.array(counts, dtype=float),
        geometry=data.geometry,
        trace=trace,
        alpha=alpha,
        C=float(C),
    )
    return kernel, kernel.transform(data.points)


def regret_check(data: Dataset, kernel: LearnedKernel, checkpoints, n_comparators=1000, seed=0):
    """Compare the alpha-player's average payoff with sampled feasible comparators.

    For each checkpoint ``T`` returns ``(T, played, best_sampled, bound)`` where
    ``played = mean_t f_t(alpha_t)``, ``best_sampled`` is the best average payoff
    of a random feasible alpha, and ``bound = 1.5 G D / sqrt(T)``. The online
    regret guarantee requires ``played >= best_sampled - bound``.
    """
    y = data.labels
    n = data.n
    C = kernel.C
    rng = np.random.default_rng(seed)
    comps = np.array([project_feasible(rng.uniform(0, C, n), y, C) for _ in range(n_comparators)])
    modes = np.array(kernel.trace.modes)
    if kernel.spherical:
        table = harmonic_table(data.points, int(modes[:, 0].max()))
        phis = table[:, modes[:, 0] ** 2 + modes[:, 0] + modes[:, 1]]
    else:
        phis = np.exp(1j * (data.points @ modes.T))
    # f_t(a) = 1.a - |sum_i y_i a_i phi_t(i)|^2, comparators x rounds
    payoff = comps.sum(axis=1)[:, None] - np.abs((comps * y) @ phis) ** 2
    cum_comp = np.cumsum(payoff, axis=1)
    cum_play = np.cumsum(kernel.trace.objectives)
    D, G = regret_constants(n, C)
    rows = []
    for T in checkpoints:
        if T > len(kernel.trace):
            continue
        played = cum_play[T - 1] / T
        best = cum_comp[:, T - 1].max() / T
        rows.append((T, float(played), float(best), float(1.5 * G * D / np.sqrt(T))))
    return rows
