"""Rotation-invariant branch on S^2.

Spherical harmonics use unit L2 normalization on the sphere. For ``m >= 0``,
``Y_{l,m} = (-1)^m Pbar_l^m(cos theta) exp(i m phi)`` (Condon-Shortley phase);
negative orders are defined by ``Y_{l,-m} = conj(Y_{l,m})``, so the involution
``(l, m) -> (l, -m)`` is exactly complex conjugation.

Harmonics are laid out flat with index ``l*l + l + m``, which orders them by
``(l, m)`` lexicographically.
"""

from __future__ import annotations

import math

import numpy as np

from .dataset import SPHERE_TOL_LOAD, Dataset, Geometry
from .errors import DimensionMismatch, DomainError, GeometryMismatch, NotOnSphere, UnsupportedDimension

DEFAULT_ELL_MAX = 31


def flat_index(ell, m):
    return ell * ell + ell + m


def index_of(k):
    """Inverse of :func:`flat_index`."""
    ell = math.isqrt(k)
    return ell, k - ell * ell - ell


def all_indices(ell_max):
    return np.array([(ell, m) for ell in range(ell_max + 1) for m in range(-ell, ell + 1)], dtype=int)


def gegenbauer(d, ell, t):
    """Gegenbauer polynomial for ``S^{d-1}`` normalized to 1 at ``t = 1``.

    Only ``d = 3`` (Legendre) is supported.
    """
    if d != 3:
        raise UnsupportedDimension(f"only d=3 is supported, got {d}")
    t = float(t)
    if abs(t) > 1 + 1e-12:
        raise DomainError(f"t={t} outside [-1, 1]")
    if ell < 0:
        raise ValueError("degree must be nonnegative")
    p_prev, p = 1.0, t
    if ell == 0:
        return p_prev
    for k in range(1, ell):
        p_prev, p = p, ((2 * k + 1) * t * p - k * p_prev) / (k + 1)
    return p


def legendre_all(ell_max, t):
    """``P_l(t)`` for ``l = 0..ell_max`` on an array of ``t`` (shape ``(ell_max+1,) + t.shape``)."""
    t = np.asarray(t, dtype=float)
    out = np.empty((ell_max + 1,) + t.shape)
    out[0] = 1.0
    if ell_max >= 1:
        out[1] = t
    for k in range(1, ell_max):
        out[k + 1] = ((2 * k + 1) * t * out[k] - k * out[k - 1]) / (k + 1)
    return out


def harmonic_dim(d, ell):
    """Dimension of degree-``ell`` harmonics on ``S^{d-1}``: C(d-1+l, l) - C(d-3+l, l-2)."""
    if d < 2 or ell < 0:
        raise ValueError("need d >= 2 and ell >= 0")
    first = math.comb(d - 1 + ell, ell)
    second = math.comb(d - 3 + ell, ell - 2) if ell >= 2 else 0
    return first - second


def _assoc_legendre(ell_max, t):
    """Normalized ``Pbar_l^m(t)`` for ``0 <= m <= l <= ell_max``, no phase factor.

    Returns shape ``(ell_max+1, ell_max+1, len(t))`` indexed ``[l, m]``.
    """
    t = np.asarray(t, dtype=float)
    u = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    out = np.zeros((ell_max + 1, ell_max + 1, t.shape[0]))
    pmm = np.full(t.shape, 1.0 / math.sqrt(4 * math.pi))
    for m in range(ell_max + 1):
        if m > 0:
            pmm = pmm * math.sqrt((2 * m + 1) / (2 * m)) * u
        out[m, m] = pmm
        if m + 1 <= ell_max:
            out[m + 1, m] = math.sqrt(2 * m + 3) * t * pmm
        for ell in range(m + 2, ell_max + 1):
            a = math.sqrt((4 * ell * ell - 1) / (ell * ell - m * m))
            b = math.sqrt((2 * ell + 1) * ((ell - 1) ** 2 - m * m) / ((2 * ell - 3) * (ell * ell - m * m)))
            out[ell, m] = a * t * out[ell - 1, m] - b * out[ell - 2, m]
    return out


def _check_sphere(points):
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != 3:
        raise UnsupportedDimension("spherical harmonics are implemented for S^2 only")
    if points.shape[0] and np.max(np.abs(np.linalg.norm(points, axis=1) - 1.0)) > SPHERE_TOL_LOAD:
        raise NotOnSphere("points must have unit norm")
    return points


def harmonic_table(points, ell_max=DEFAULT_ELL_MAX) -> np.ndarray:
    """Complex ``(n, (ell_max+1)^2)`` table of ``Y_{l,m}(x_i)``."""
    points = _check_sphere(points)
    t = np.clip(points[:, 2], -1.0, 1.0)
    phi = np.arctan2(points[:, 1], points[:, 0])
    plm = _assoc_legendre(ell_max, t)
    table = np.empty((points.shape[0], (ell_max + 1) ** 2), dtype=complex)
    for m in range(ell_max + 1):
        phase = (-1) ** m * np.exp(1j * m * phi)
        for ell in range(m, ell_max + 1):
            y = plm[ell, m] * phase
            table[:, flat_index(ell, m)] = y
            if m:
                table[:, flat_index(ell, -m)] = np.conj(y)
    return table


def eval_harmonics(x, ell_max=DEFAULT_ELL_MAX) -> np.ndarray:
    """Row of :func:`harmonic_table` for a single unit vector."""
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != 3:
        raise UnsupportedDimension("x must be a 3-vector")
    return harmonic_table(x[None, :], ell_max)[0]


def _harmonics_for(points, modes):
    modes = np.atleast_2d(np.asarray(modes, dtype=int))
    if np.any(np.abs(modes[:, 1]) > modes[:, 0]):
        raise ValueError("harmonic index needs |m| <= ell")
    ell_max = int(modes[:, 0].max()) if modes.size else 0
    table = harmonic_table(points, ell_max)
    return table[:, flat_index(modes[:, 0], modes[:, 1])]


def _require_sphere(data: Dataset):
    if data.geometry is not Geometry.SPHERE:
        raise GeometryMismatch("spherical operations need a UnitSphere dataset")


def _signed(data, alpha):
    alpha = np.asarray(alpha, dtype=float).ravel()
    if alpha.shape[0] != data.n:
        raise DimensionMismatch(f"alpha has length {alpha.shape[0]}, expected {data.n}")
    return data.labels * alpha


def sph_potential_batch(data: Dataset, alpha, modes) -> np.ndarray:
    _require_sphere(data)
    w = _signed(data, alpha)
    return np.abs(w @ _harmonics_for(data.points, modes)) ** 2


def sph_potential(data: Dataset, alpha, index) -> float:
    """``|sum_i y_i alpha_i Y_{l,m}(x_i)|^2`` for ``index = (l, m)``."""
    return float(sph_potential_batch(data, alpha, [tuple(index)])[0])


def enumerate_max(data: Dataset, alpha, ell_max=DEFAULT_ELL_MAX, table=None):
    """Exhaustive argmax of the potential over ``l <= ell_max``.

    Ties go to the smallest ``(l, m)``. A precomputed :func:`harmonic_table`
    can be passed to avoid re-evaluating the harmonics every round.
    """
    _require_sphere(data)
    if ell_max < 0:
        raise ValueError("ell_max must be nonnegative")
    w = _signed(data, alpha)
    if table is None:
        table = harmonic_table(data.points, ell_max)
    values = np.abs(w @ table[:, : (ell_max + 1) ** 2]) ** 2
    k = int(np.argmax(values))
    return index_of(k), float(values[k])


def canonical(index):
    """Representative of ``{(l, m), (l, -m)}`` used for merging atoms."""
    ell, m = index
    return int(ell), abs(int(m))


def harmonic_features(points, modes, scales=None) -> np.ndarray:
    """Real feature columns: ``Y_{l,0}`` alone for ``m = 0``, else ``(Re Y, Im Y)``.

    With ``scales`` (one per mode) each mode's columns are multiplied by it.
    ``Phi @ Phi.T`` then equals the Gram matrix of the measure with weights ``scales**2``.
    """
    points = _check_sphere(points.points if isinstance(points, Dataset) else points)
    modes = np.atleast_2d(np.asarray(modes, dtype=int))
    if modes.size == 0:
        return np.empty((points.shape[0], 0))
    ys = _harmonics_for(points, modes)
    scales = np.ones(modes.shape[0]) if scales is None else np.asarray(scales, float)
    cols = []
    for j, (_, m) in enumerate(modes):
        cols.append(scales[j] * ys[:, j].real)
        if m != 0:
            cols.append(scales[j] * ys[:, j].imag)
    return np.column_stack(cols)


def feature_width(modes):
    modes = np.atleast_2d(np.asarray(modes, dtype=int))
    return int(sum(1 if m == 0 else 2 for _, m in modes))


def gram_from_measure(measure, x, x2=None) -> np.ndarray:
    """``K[i, j] = sum_atoms w Re(Y(x_i) conj(Y(x2_j)))``."""
    x = _check_sphere(x)
    x2 = x if x2 is None else _check_sphere(x2)
    y1 = _harmonics_for(x, measure.modes)
    y2 = _harmonics_for(x2, measure.modes)
    return ((y1 * measure.weights) @ np.conj(y2).T).real
