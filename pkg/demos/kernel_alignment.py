"""
Features, Gram matrices and alignment
=====================================

A measure with atoms (omega_j, w_j) defines k(x, x') = sum_j w_j cos<omega_j, x - x'>.
Its cos/sin features reproduce the Gram matrix exactly, and the alignment
y^T G y is the measure-weighted Fourier potential.
"""

import numpy as np

from marginkernel import DualMeasure, alignment, feature_map, gen_windmill, kernel_from_measure, potential
from marginkernel.fourier import gram_from_measure

rng = np.random.default_rng(0)
data = gen_windmill(200, seed=0)
modes = rng.normal(scale=6.0, size=(25, 2))
measure = DualMeasure.uniform(modes)

phi = feature_map(data.points, modes)
G = gram_from_measure(measure, data.points)
print("max |Phi Phi^T / T - G| =", np.abs(phi @ phi.T / len(modes) - G).max())

# %%
# alignment is linear in the measure: average of per-mode potentials
y = data.labels
print("y^T G y              =", y @ G @ y)
print("alignment            =", alignment(data, np.ones(data.n), measure))
print("mean potential       =", np.mean([potential(data, np.ones(data.n), om) for om in modes]))

# %%
# a single kernel value from the closed form
print("k(x0, x1) =", kernel_from_measure(measure, data.points[0], data.points[1]), "=", G[0, 1])
