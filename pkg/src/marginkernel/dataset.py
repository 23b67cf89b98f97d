"""Labeled sample sets, the two synthetic toy tasks, and CSV I/O."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import EmptyDataset, InvalidLabel, NotOnSphere, RaggedRows

SPHERE_TOL_LOAD = 1e-9
SPHERE_TOL_GEN = 1e-12


class Geometry(str, Enum):
    EUCLIDEAN = "euclidean"
    SPHERE = "sphere"


@dataclass(frozen=True)
class Dataset:
    """Points ``x_i`` with labels ``y_i in {+1, -1}``.

    ``max_norm`` is computed on construction and never passed in.
    """

    points: np.ndarray
    labels: np.ndarray
    geometry: Geometry = Geometry.EUCLIDEAN
    max_norm: float = field(init=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise ValueError("points must be a 2-d array")
        lab = np.asarray(self.labels, dtype=np.float64).ravel()
        if lab.shape[0] != pts.shape[0]:
            raise ValueError("points and labels disagree on n")
        bad = np.flatnonzero((lab != 1.0) & (lab != -1.0))
        if bad.size:
            raise InvalidLabel(int(bad[0]) + 1, lab[bad[0]])
        geometry = Geometry(self.geometry)
        norms = np.linalg.norm(pts, axis=1)
        if geometry is Geometry.SPHERE and pts.shape[0]:
            dev = np.abs(norms - 1.0)
            if dev.max() > SPHERE_TOL_LOAD:
                i = int(np.argmax(dev))
                raise NotOnSphere(f"row {i + 1} has norm {norms[i]!r}")
        pts.setflags(write=False)
        lab.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", lab)
        object.__setattr__(self, "geometry", geometry)
        object.__setattr__(self, "max_norm", float(norms.max()) if norms.size else 0.0)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def subset(self, idx) -> "Dataset":
        return Dataset(self.points[idx], self.labels[idx], self.geometry)


def _parse_label(cell, row):
    s = cell.strip()
    if s in ("1", "+1", "1.0", "+1.0"):
        return 1.0
    if s in ("-1", "-1.0"):
        return -1.0
    raise InvalidLabel(row, s)


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def load_csv(path, geometry=Geometry.EUCLIDEAN) -> Dataset:
    """Read ``label,coord_1,...,coord_d`` rows.

    A single header row is skipped when its first cell is not numeric.
    Sphere data is validated against the unit-norm tolerance, never renormalized.
    Row numbers in error messages count data rows from 1.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if rows and not _is_number(rows[0][0].strip()):
        rows = rows[1:]
    if not rows:
        raise EmptyDataset(f"{path}: no data rows")
    width = len(rows[0])
    labels = np.empty(len(rows))
    points = np.empty((len(rows), width - 1))
    for k, row in enumerate(rows, start=1):
        if len(row) != width:
            raise RaggedRows(k, width, len(row))
        labels[k - 1] = _parse_label(row[0], k)
        points[k - 1] = [float(c) for c in row[1:]]
    return Dataset(points, labels, geometry)


def save_csv(data: Dataset, path, header=True):
    """Write ``data`` in the format read by :func:`load_csv` (17 significant digits)."""
    with open(path, "w", newline="") as fh:
        if header:
            fh.write("label," + ",".join(f"x{j + 1}" for j in range(data.d)) + "\n")
        for y, x in zip(data.labels, data.points):
            fh.write("%d," % int(y) + ",".join("%.17g" % v for v in x) + "\n")


def windmill_label(points, blades=4, radius=1.0):
    """+1 where ``sin(blades*theta + kappa*r) > 0`` with ``kappa = blades/radius``."""
    points = np.atleast_2d(points)
    r = np.hypot(points[:, 0], points[:, 1])
    theta = np.arctan2(points[:, 1], points[:, 0])
    kappa = blades / radius
    return np.where(np.sin(blades * theta + kappa * r) > 0, 1.0, -1.0)


def gen_windmill(n, blades=4, radius=1.0, noise=0.0, seed=0) -> Dataset:
    """Uniform points in a disk, labeled by interleaved spiral blades.

    Parameters
    ----------
    n : int
        Number of samples (0 gives an empty dataset).
    blades : int
        Number of positive blades.
    radius : float
        Disk radius; the spiral makes ``blades`` radians of twist over it.
    noise : float
        Probability of flipping each label independently.
    seed : int
        Seed for ``numpy.random.default_rng``.
    """
    if n < 0 or blades < 1 or radius <= 0 or not 0 <= noise <= 1:
        raise ValueError("invalid windmill parameters")
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(n))
    theta = 2 * np.pi * rng.random(n)
    pts = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    y = windmill_label(pts, blades, radius) if n else np.empty(0)
    flip = rng.random(n) < noise
    y = np.where(flip, -y, y)
    return Dataset(pts, y, Geometry.EUCLIDEAN)


def checkerboard_label(points, bands=4):
    """Parity of the (polar, azimuth) cell, +1 when even.

    The azimuth is taken in ``[0, 2*pi)`` so there are ``2*bands`` azimuthal cells.
    """
    points = np.atleast_2d(points)
    polar = np.arccos(np.clip(points[:, 2], -1.0, 1.0))
    azim = np.mod(np.arctan2(points[:, 1], points[:, 0]), 2 * np.pi)
    cell = np.floor(bands * polar / np.pi) + np.floor(bands * azim / np.pi)
    return np.where(cell % 2 == 0, 1.0, -1.0)


def gen_sphere_checkerboard(n, bands=4, seed=0) -> Dataset:
    """Uniform points on S^2 labeled by angular parity cells."""
    if n < 0 or bands < 1:
        raise ValueError("invalid checkerboard parameters")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, 3))
    pts = g / np.linalg.norm(g, axis=1, keepdims=True)
    y = checkerboard_label(pts, bands) if n else np.empty(0)
    return Dataset(pts, y, Geometry.SPHERE)


def train_test_split(data: Dataset, n_train, seed=0):
    """Random disjoint split into ``n_train`` and the remaining samples."""
    perm = np.random.default_rng(seed).permutation(data.n)
    return data.subset(perm[:n_train]), data.subset(perm[n_train:])
