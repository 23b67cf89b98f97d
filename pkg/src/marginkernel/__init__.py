"""Learned translation- and rotation-invariant kernels via Fourier peak finding
inside a no-regret game against the SVM dual."""

__version__ = "0.1.0"

from .baselines import RbfParams, rbf_random_features
from .dataset import (
    Dataset,
    Geometry,
    gen_sphere_checkerboard,
    gen_windmill,
    load_csv,
    save_csv,
    train_test_split,
)
from .fourier import (
    DualMeasure,
    alignment,
    feature_map,
    kernel_from_measure,
    potential,
    potential_batch,
    potential_grad,
)
from .game import (
    BoostTrace,
    LearnedKernel,
    boost,
    dual_gradient,
    dual_objective,
    project_feasible,
    regret_check,
)
from .langevin import LangevinParams, find_peak, init_chains, median_heuristic
from .spherical import enumerate_max, eval_harmonics, gegenbauer, harmonic_dim, sph_potential
from .svm import LinearModel, accuracy, margin, predict, train_linear_svm

__all__ = [
    "BoostTrace",
    "Dataset",
    "DualMeasure",
    "Geometry",
    "LangevinParams",
    "LearnedKernel",
    "LinearModel",
    "RbfParams",
    "accuracy",
    "alignment",
    "boost",
    "dual_gradient",
    "dual_objective",
    "enumerate_max",
    "eval_harmonics",
    "feature_map",
    "find_peak",
    "gegenbauer",
    "gen_sphere_checkerboard",
    "gen_windmill",
    "harmonic_dim",
    "init_chains",
    "kernel_from_measure",
    "load_csv",
    "margin",
    "median_heuristic",
    "potential",
    "potential_batch",
    "potential_grad",
    "predict",
    "project_feasible",
    "rbf_random_features",
    "regret_check",
    "save_csv",
    "sph_potential",
    "train_linear_svm",
    "train_test_split",
]
