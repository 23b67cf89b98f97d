import numpy as np
import pytest

from conftest import random_dataset
from marginkernel.dataset import Dataset, gen_sphere_checkerboard, gen_windmill
from marginkernel.errors import DegenerateData
from marginkernel.fourier import DualMeasure, gram_from_measure, potential
from marginkernel.game import (
    box_violation,
    boost,
    dual_gradient,
    dual_objective,
    project_feasible,
    regret_check,
    regret_constants,
)
from marginkernel.langevin import LangevinParams

FAST = LangevinParams(chains=40, tau=30)


def gram_objective(data, alpha, measure):
    G = gram_from_measure(measure, data.points)
    ya = data.labels * alpha
    return alpha.sum() - 0.5 * ya @ G @ ya


def test_objective_zero_alpha(rng):
    data = random_dataset(rng, 5, 2)
    assert dual_objective(data, np.zeros(5), DualMeasure.uniform(rng.standard_normal((2, 2)))) == 0.0


def test_objective_matches_gram(rng):
    data = random_dataset(rng, 3, 2)
    alpha = rng.random(3)
    m = DualMeasure(rng.standard_normal((2, 2)), rng.random(2))
    assert abs(dual_objective(data, alpha, m) - gram_objective(data, alpha, m)) <= 1e-10


def test_objective_symmetrized_pair(rng):
    data = random_dataset(rng, 6, 2)
    alpha = rng.random(6)
    omega = rng.standard_normal(2)
    # delta_w + delta_-w has total mass 2: one stored atom of weight 2
    m = DualMeasure([omega], [2.0])
    assert abs(dual_objective(data, alpha, m) - (alpha.sum() - potential(data, alpha, omega))) <= 1e-12


def test_gradient_at_zero():
    np.testing.assert_array_equal(dual_gradient(np.zeros(3), [1, -1, 1], np.exp(1j * np.arange(3))), np.ones(3))


def test_gradient_finite_differences(rng):
    for _ in range(10):
        data = random_dataset(rng, 8, 2)
        alpha = rng.random(8)
        omega = rng.standard_normal(2)
        m = DualMeasure([omega], [2.0])
        g = dual_gradient(alpha, data.labels, np.exp(1j * data.points @ omega))
        h = 1e-6
        num = np.array([
            (dual_objective(data, alpha + h * e, m) - dual_objective(data, alpha - h * e, m)) / (2 * h)
            for e in np.eye(8)
        ])
        assert np.linalg.norm(g - num) <= 1e-6 * np.linalg.norm(num)


def test_gradient_naive_double_sum(rng):
    data = random_dataset(rng, 12, 3)
    alpha = rng.random(12)
    omega = rng.standard_normal(3)
    g = dual_gradient(alpha, data.labels, np.exp(1j * data.points @ omega))
    x, y = data.points, data.labels
    naive = np.array([
        1 - sum(2 * y[i] * y[j] * alpha[j] * np.cos(omega @ (x[i] - x[j])) for j in range(12)) for i in range(12)
    ])
    assert np.max(np.abs(g - naive)) <= 1e-10


def test_projection_fixed_point():
    y = np.array([1.0, -1.0, 1.0, -1.0])
    a = np.array([0.2, 0.5, 0.3, 0.0])
    np.testing.assert_array_equal(project_feasible(a, y, 1.0), a)


def test_projection_hand_iteration():
    C = 1.0
    y = np.array([1.0, -1.0])
    np.testing.assert_allclose(project_feasible([2 * C, 0.0], y, C, passes=1), [C / 2, C / 2])
    np.testing.assert_allclose(project_feasible([2 * C, 0.0], y, C, passes=10), [C / 2, C / 2])


def test_projection_hyperplane_exact(rng):
    for _ in range(200):
        n = int(rng.integers(2, 200))
        y = rng.choice([-1.0, 1.0], n)
        C = float(rng.uniform(0.1, 10))
        a = project_feasible(rng.normal(C / 2, C, n), y, C)
        assert abs(y @ a) <= 1e-12 * max(1.0, C)


def test_projection_to_tolerance(rng):
    for _ in range(200):
        n = int(rng.integers(2, 200))
        y = rng.choice([-1.0, 1.0], n)
        C = float(rng.uniform(0.1, 10))
        a = project_feasible(rng.normal(C / 2, C, n), y, C, tol=1e-9)
        assert box_violation(a, C) <= 1e-9 * C
        assert abs(y @ a) <= 1e-12 * max(1.0, C)


def test_projection_agrees_with_exact_projection_limit(rng):
    # alternating projections converge to a point of the intersection; for a raw
    # vector inside the box the first hyperplane step is already the exact answer
    n = 50
    y = rng.choice([-1.0, 1.0], n)
    raw = rng.uniform(0.3, 0.7, n)
    a = project_feasible(raw, y, 1.0, passes=1)
    np.testing.assert_allclose(a, raw - (y @ raw / n) * y, atol=1e-15)


def test_boost_single_round(rng):
    data = random_dataset(rng, 30, 2)
    kernel, feats = boost(data, C=1.0, T=1, params=FAST)
    assert len(kernel.measure) == 1 and kernel.measure.weights[0] == 1.0
    assert feats.shape == (30, 2)


def test_boost_structure_and_feasibility():
    data = gen_windmill(150, seed=4)
    alphas = []
    kernel, feats = boost(data, C=1.0, T=25, params=FAST, callback=lambda t, a: alphas.append(a.copy()))
    tr = kernel.trace
    assert len(tr) == 25 and all(v >= 0 for v in tr.values)
    assert abs(kernel.measure.total - 1) <= 1e-12
    assert feats.shape == (150, 50)
    for a in alphas:
        assert abs(data.labels @ a) <= 1e-12
        assert box_violation(a, 1.0) <= 1e-6
    # features realize the learned measure exactly
    G = gram_from_measure(kernel.measure, data.points)
    assert np.max(np.abs(feats @ feats.T / 25 - G)) <= 1e-12


def test_boost_top_k_counts_rounds():
    data = gen_windmill(120, seed=5)
    kernel, feats = boost(data, C=1.0, T=23, params=LangevinParams(chains=40, tau=20, top_k=5))
    assert len(kernel.trace) == 23 and feats.shape[1] == 46


def test_boost_deterministic():
    data = gen_windmill(100, seed=6)
    a, fa = boost(data, T=8, params=FAST)
    b, fb = boost(data, T=8, params=FAST)
    assert fa.tobytes() == fb.tobytes()
    assert a.alpha.tobytes() == b.alpha.tobytes()


def test_boost_single_class_rejected():
    data = Dataset(np.eye(3), [1, 1, 1])
    with pytest.raises(DegenerateData):
        boost(data, T=3)


def test_boost_spherical_merges_atoms():
    data = gen_sphere_checkerboard(300, seed=2)
    kernel, feats = boost(data, C=1.0, T=30, ell_max=12)
    assert kernel.rounds == 30
    keys = {(int(l), abs(int(m))) for l, m in kernel.modes}
    assert len(keys) == len(kernel.modes) <= 30
    assert abs(kernel.measure.total - 1) <= 1e-12
    G = gram_from_measure(kernel.measure, data.points)
    assert np.max(np.abs(feats @ feats.T / 30 - G)) <= 1e-12


def test_regret_inequality_small_run():
    data = gen_windmill(200, seed=8)
    kernel, _ = boost(data, C=1.0, T=40, params=FAST)
    rows = regret_check(data, kernel, [10, 20, 40], n_comparators=200)
    assert [r[0] for r in rows] == [10, 20, 40]
    for _, played, best, bound in rows:
        assert played >= best - bound


def test_regret_constants():
    D, G = regret_constants(100, 2.0)
    assert D == pytest.approx(20.0) and G == pytest.approx(401 * 10.0)
