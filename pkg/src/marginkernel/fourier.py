"""Translation-invariant branch: the reweighted Fourier potential and the
kernels / features defined by finitely supported symmetric measures.

A stored atom ``(omega, w)`` stands for ``(w/2) * (delta_omega + delta_-omega)``,
so every kernel evaluation only needs cosines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import DimensionMismatch, EmptyMeasure


@dataclass
class DualMeasure:
    """Finitely supported symmetric measure over modes.

    ``modes`` is ``(T, d)`` float frequencies for the continuous branch, or
    ``(T, 2)`` integer ``(ell, m)`` pairs when ``spherical`` is true.
    """

    modes: np.ndarray
    weights: np.ndarray
    spherical: bool = False

    def __post_init__(self):
        self.modes = np.atleast_2d(np.asarray(self.modes, dtype=int if self.spherical else float))
        self.weights = np.asarray(self.weights, dtype=float).ravel()
        if self.modes.shape[0] != self.weights.shape[0]:
            raise DimensionMismatch("modes and weights disagree in length")
        if np.any(self.weights <= 0):
            raise ValueError("atom weights must be strictly positive")

    def __len__(self):
        return self.weights.shape[0]

    @property
    def total(self) -> float:
        return float(self.weights.sum())

    @classmethod
    def uniform(cls, modes, spherical=False):
        modes = np.atleast_2d(modes)
        t = modes.shape[0]
        return cls(modes, np.full(t, 1.0 / t), spherical)


def _signed(data: Dataset, alpha):
    alpha = np.asarray(alpha, dtype=float).ravel()
    if alpha.shape[0] != data.n:
        raise DimensionMismatch(f"alpha has length {alpha.shape[0]}, expected {data.n}")
    return data.labels * alpha


def _check_omegas(data, omegas):
    omegas = np.asarray(omegas, dtype=float)
    if omegas.ndim == 1:
        omegas = omegas[None, :]
    if omegas.ndim != 2 or omegas.shape[1] != data.d:
        raise DimensionMismatch(f"frequencies must have dimension {data.d}")
    return omegas


def potential_batch(data: Dataset, alpha, omegas, with_grad=False):
    """Evaluate ``v(omega) = |sum_i y_i alpha_i exp(i <omega, x_i>)|^2`` on many rows.

    Parameters
    ----------
    data : Dataset
    alpha : array_like, shape (n,)
    omegas : array_like, shape (m, d)
    with_grad : bool
        Also return the ``(m, d)`` gradient with respect to omega.

    Returns
    -------
    values : ndarray, shape (m,)
    grads : ndarray, shape (m, d) or None
    """
    w = _signed(data, alpha)
    omegas = _check_omegas(data, omegas)
    phase = omegas @ data.points.T
    cos, sin = np.cos(phase), np.sin(phase)
    c = cos @ w
    s = sin @ w
    values = c * c + s * s
    if not with_grad:
        return values, None
    wx = data.points * w[:, None]
    grads = 2.0 * (s[:, None] * (cos @ wx) - c[:, None] * (sin @ wx))
    return values, grads


def potential(data: Dataset, alpha, omega) -> float:
    omega = np.asarray(omega, dtype=float)
    if omega.ndim != 1:
        raise DimensionMismatch("omega must be a vector")
    return float(potential_batch(data, alpha, omega)[0][0])


def potential_grad(data: Dataset, alpha, omega) -> np.ndarray:
    omega = np.asarray(omega, dtype=float)
    if omega.ndim != 1:
        raise DimensionMismatch("omega must be a vector")
    return potential_batch(data, alpha, omega, with_grad=True)[1][0]


def feature_map(points, modes) -> np.ndarray:
    """Real features ``(cos<w_t, x>, sin<w_t, x>)`` in column pairs ``2t, 2t+1``.

    ``points`` may be a Dataset or an ``(n, d)`` array. Features are unscaled;
    ``Phi @ Phi.T / T`` is the Gram matrix of the uniform measure over ``modes``.
    """
    x = points.points if isinstance(points, Dataset) else np.atleast_2d(np.asarray(points, float))
    modes = np.atleast_2d(np.asarray(modes, dtype=float))
    if modes.shape[0] == 0:
        return np.empty((x.shape[0], 0))
    if modes.shape[1] != x.shape[1]:
        raise DimensionMismatch(f"modes have dimension {modes.shape[1]}, data {x.shape[1]}")
    phase = x @ modes.T
    out = np.empty((x.shape[0], 2 * modes.shape[0]))
    out[:, 0::2] = np.cos(phase)
    out[:, 1::2] = np.sin(phase)
    return out


def gram_from_measure(measure: DualMeasure, x, x2=None) -> np.ndarray:
    """Gram matrix ``K[i, j] = sum_atoms w cos<omega, x_i - x2_j>``."""
    if len(measure) == 0:
        raise EmptyMeasure("measure has no atoms")
    if measure.spherical:
        from .spherical import gram_from_measure as sph_gram

        return sph_gram(measure, x, x2)
    x = np.atleast_2d(np.asarray(x, float))
    x2 = x if x2 is None else np.atleast_2d(np.asarray(x2, float))
    if x.shape[1] != measure.modes.shape[1] or x2.shape[1] != measure.modes.shape[1]:
        raise DimensionMismatch("points and modes disagree in dimension")
    p1 = x @ measure.modes.T
    p2 = x2 @ measure.modes.T
    # cos(a - b) = cos a cos b + sin a sin b
    return (np.cos(p1) * measure.weights) @ np.cos(p2).T + (np.sin(p1) * measure.weights) @ np.sin(p2).T


def kernel_from_measure(measure: DualMeasure, x, x2) -> float:
    x = np.asarray(x, float).ravel()
    x2 = np.asarray(x2, float).ravel()
    if x.shape != x2.shape:
        raise DimensionMismatch("points disagree in dimension")
    return float(gram_from_measure(measure, x[None, :], x2[None, :])[0, 0])


def alignment(data: Dataset, alpha, measure: DualMeasure) -> float:
    """``sum_atoms w * v_alpha(mode)``, equal to ``(Y alpha)^T G (Y alpha)``."""
    if len(measure) == 0:
        raise EmptyMeasure("measure has no atoms")
    if measure.spherical:
        from .spherical import sph_potential_batch

        values = sph_potential_batch(data, alpha, measure.modes)
    else:
        values = potential_batch(data, alpha, measure.modes)[0]
    return float(measure.weights @ values)


def save_measure(measure: DualMeasure, path_or_fh):
    """CSV ``weight,omega_1..omega_d`` (or ``weight,ell,m``), 17 significant digits."""
    lines = []
    if measure.spherical:
        lines.append("weight,ell,m")
        for w, (ell, m) in zip(measure.weights, measure.modes):
            lines.append("%.17g,%d,%d" % (w, ell, m))
    else:
        d = measure.modes.shape[1]
        lines.append("weight," + ",".join(f"omega_{j + 1}" for j in range(d)))
        for w, om in zip(measure.weights, measure.modes):
            lines.append(",".join("%.17g" % v for v in (w, *om)))
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_fh, "write"):
        path_or_fh.write(text)
    else:
        with open(path_or_fh, "w") as fh:
            fh.write(text)


def parse_measure(lines) -> DualMeasure:
    lines = [ln.strip() for ln in lines if ln.strip() and not ln.startswith("#")]
    header = lines[0].split(",")
    spherical = header[1:] == ["ell", "m"]
    rows = [ln.split(",") for ln in lines[1:]]
    weights = [float(r[0]) for r in rows]
    if spherical:
        modes = np.array([[int(r[1]), int(r[2])] for r in rows], dtype=int).reshape(-1, 2)
    else:
        modes = np.array([[float(v) for v in r[1:]] for r in rows]).reshape(-1, len(header) - 1)
    return DualMeasure(modes, weights, spherical)


def load_measure(path) -> DualMeasure:
    with open(path) as fh:
        return parse_measure(fh.readlines())
