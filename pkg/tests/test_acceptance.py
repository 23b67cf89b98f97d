"""End-to-end acceptance checks.

Each test prints one ``[ACCEPT n] PASS|FAIL`` line with the measured numbers and
the summary of all lines is repeated at the end of the pytest run.
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE, random_dataset
from marginkernel import cli
from marginkernel.baselines import RbfParams, rbf_random_features
from marginkernel.dataset import Dataset, Geometry, gen_sphere_checkerboard, gen_windmill, save_csv
from marginkernel.fourier import DualMeasure, feature_map, gram_from_measure, potential, potential_grad, potential_batch
from marginkernel.game import box_violation, boost, dual_gradient, project_feasible, regret_check
from marginkernel.langevin import LangevinParams, find_peak
from marginkernel.spherical import all_indices, flat_index, harmonic_dim, harmonic_features, harmonic_table
from marginkernel.svm import accuracy, train_linear_svm

# Search settings for the windmill runs: 10 modes per Langevin call and a
# 4x online step keep the 1000-round run within minutes on one core.
WINDMILL_SEARCH = dict(top_k=10)
WINDMILL_STEP = 4.0


def report(number, ok, detail):
    line = f"[ACCEPT {number:>2}] {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok


def windmill_run(T, chains, seed=0):
    train = gen_windmill(2000, seed=seed)
    test = gen_windmill(10000, seed=seed + 1)
    start = time.perf_counter()
    kernel, features = boost(
        train, C=1.0, T=T, params=LangevinParams(chains=chains, **WINDMILL_SEARCH),
        step_multiplier=WINDMILL_STEP,
    )
    model = train_linear_svm(features, train.labels, C=1.0)
    test_acc = accuracy(model, kernel.transform(test.points), test.labels)
    train_acc = accuracy(model, features, train.labels)
    return train, test, kernel, train_acc, test_acc, time.perf_counter() - start


@pytest.fixture(scope="module")
def windmill_full():
    return windmill_run(T=1000, chains=500)


@pytest.mark.slow
def test_1_windmill_full(windmill_full):
    train, test, kernel, train_acc, test_acc, wall = windmill_full
    rbf_train, omegas = rbf_random_features(train, RbfParams(m=kernel.rounds, seed=0))
    rbf = train_linear_svm(rbf_train, train.labels, C=1.0)
    rbf_acc = accuracy(rbf, feature_map(test.points, omegas), test.labels)
    ok = test_acc >= 0.985 and rbf_acc <= 0.95 and wall <= 600
    report(1, ok, f"windmill T=1000: learned train {train_acc:.4f} test {test_acc:.4f} (>= 0.985), "
                  f"RBF-RF {2 * kernel.rounds} features test {rbf_acc:.4f} (<= 0.95), {wall:.0f}s (<= 600s)")
    assert test_acc >= 0.985
    assert rbf_acc <= 0.95
    assert wall <= 600


def test_1_windmill_smoke():
    _, _, _, train_acc, test_acc, wall = windmill_run(T=300, chains=100)
    ok = test_acc >= 0.97 and wall <= 90
    report("1s", ok, f"windmill smoke T=300, 100 chains: test {test_acc:.4f} (>= 0.97), {wall:.1f}s (<= 90s)")
    assert test_acc >= 0.97
    assert wall <= 90


def test_2_sphere_checkerboard():
    train = gen_sphere_checkerboard(2000, seed=0)
    test = gen_sphere_checkerboard(10000, seed=1)
    start = time.perf_counter()
    kernel, features = boost(train, C=1.0, T=100, ell_max=31)
    model = train_linear_svm(features, train.labels, C=1.0)
    test_acc = accuracy(model, kernel.transform(test.points), test.labels)
    wall = time.perf_counter() - start
    atoms = len(kernel.modes)
    ok = test_acc >= 0.97 and atoms <= 60 and wall <= 180
    report(2, ok, f"sphere checkerboard T=100: test {test_acc:.4f} (>= 0.97), {atoms} atoms (<= 60), {wall:.1f}s")
    assert test_acc >= 0.97 and atoms <= 60 and wall <= 180


def cosine_gram(x, modes, weights):
    """sum_j w_j cos(<omega_j, x - x'>), one pair at a time."""
    n = x.shape[0]
    G = np.zeros((n, n))
    for i in range(n):
        for k in range(n):
            G[i, k] = sum(w * math.cos(float(om @ (x[i] - x[k]))) for om, w in zip(modes, weights))
    return G


def harmonic_gram(x, modes, weights):
    """sum_j w_j Re(Y_j(x) conj Y_j(x')) from the complex harmonic table."""
    tab = harmonic_table(x, int(max(ell for ell, _ in modes)))
    G = np.zeros((x.shape[0], x.shape[0]))
    for (ell, m), w in zip(modes, weights):
        col = tab[:, flat_index(ell, m)]
        G += w * np.real(np.outer(col, np.conj(col)))
    return G


def test_3_kernel_exactness():
    rng = np.random.default_rng(3)
    worst = 0.0
    for trial in range(20):
        T = int(rng.integers(1, 65))
        n = int(rng.integers(2, 51))
        if trial % 2 == 0:
            d = int(rng.integers(1, 5))
            x = random_dataset(rng, n, d).points
            modes = rng.standard_normal((T, d)) * rng.uniform(0.5, 4)
            phi = feature_map(x, modes)
            G = cosine_gram(x, modes, np.full(T, 1.0 / T))
        else:
            x = random_dataset(rng, n, 3, sphere=True).points
            idx = all_indices(12)
            modes = [idx[k] for k in rng.integers(0, len(idx), size=T)]
            phi = harmonic_features(x, np.array(modes), np.ones(T))
            G = harmonic_gram(x, modes, np.full(T, 1.0 / T))
        worst = max(worst, np.max(np.abs(phi @ phi.T / T - G)))
    ok = worst <= 1e-12
    report(3, ok, f"max |Phi Phi^T / T - G| over 20 mode sets = {worst:.2e} (<= 1e-12)")
    assert ok


def test_4_alignment_identity():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 11))
        d = int(rng.integers(1, 4))
        atoms = int(rng.integers(1, 6))
        data = random_dataset(rng, n, d)
        alpha = rng.uniform(0, 2, n)
        modes = rng.standard_normal((atoms, d)) * 2
        weights = rng.uniform(0.1, 2, atoms)
        lhs = sum(w * potential(data, alpha, om) for om, w in zip(modes, weights))
        ya = data.labels * alpha
        rhs = ya @ cosine_gram(data.points, modes, weights) @ ya
        worst = max(worst, abs(lhs - rhs))
    ok = worst <= 1e-10
    report(4, ok, f"max |sum w v(omega) - (Ya)^T G (Ya)| over 50 instances = {worst:.2e} (<= 1e-10)")
    assert ok


def _payoff(alpha, y, phi):
    return alpha.sum() - abs(np.sum(y * alpha * phi)) ** 2


def test_5_gradients():
    rng = np.random.default_rng(5)
    worst_v = worst_f = 0.0
    for _ in range(100):
        n, d = int(rng.integers(2, 30)), int(rng.integers(1, 5))
        data = random_dataset(rng, n, d)
        alpha = rng.uniform(0, 1, n)
        omega = rng.standard_normal(d)
        g = potential_grad(data, alpha, omega)
        h = 1e-6
        fd = np.array([
            (potential(data, alpha, omega + h * e) - potential(data, alpha, omega - h * e)) / (2 * h)
            for e in np.eye(d)
        ])
        worst_v = max(worst_v, np.linalg.norm(g - fd) / max(np.linalg.norm(fd), 1e-8))

        phi = np.exp(1j * (data.points @ rng.standard_normal(d)))
        g = dual_gradient(alpha, data.labels, phi)
        fd = np.array([
            (_payoff(alpha + h * e, data.labels, phi) - _payoff(alpha - h * e, data.labels, phi)) / (2 * h)
            for e in np.eye(n)
        ])
        worst_f = max(worst_f, np.linalg.norm(g - fd) / max(np.linalg.norm(fd), 1e-8))
    ok = worst_v <= 1e-5 and worst_f <= 1e-6
    report(5, ok, f"finite differences: potential_grad rel err {worst_v:.2e} (<= 1e-5), "
                  f"dual_gradient rel err {worst_f:.2e} (<= 1e-6)")
    assert ok


def test_6_projection_ten_passes():
    rng = np.random.default_rng(6)
    worst_plane = worst_box = 0.0
    failures = 0
    for _ in range(1000):
        n = int(rng.integers(2, 201))
        C = float(rng.uniform(0.1, 10))
        y = rng.choice([-1.0, 1.0], size=n)
        raw = rng.normal(C / 2, C, size=n)
        alpha = project_feasible(raw, y, C, passes=10)
        worst_plane = max(worst_plane, abs(y @ alpha))
        viol = box_violation(alpha, C) / C
        worst_box = max(worst_box, viol)
        failures += viol > 1e-6
    ok = worst_plane <= 1e-12 and worst_box <= 1e-6
    report(6, ok, f"10-pass projection on 1000 raw vectors: max |y^T a| {worst_plane:.1e} (<= 1e-12), "
                  f"max box violation {worst_box:.1e} C (<= 1e-6 C), {failures} vectors over the box tolerance")
    assert worst_plane <= 1e-12
    assert worst_box <= 1e-6


def planted_dataset():
    g = np.linspace(0, 1, 30)
    x = np.array([(a, b) for a in g for b in g])
    y = np.where(np.cos(x @ np.array([6 * np.pi, 0.0])) >= 0, 1.0, -1.0)
    return Dataset(x, y)


def test_7_planted_peak():
    data = planted_dataset()
    alpha = np.ones(data.n)
    axis = np.linspace(-30, 30, 100)
    grid = np.array([(a, b) for a in axis for b in axis])
    grid_max = potential_batch(data, alpha, grid)[0].max()
    hits, slowest = 0, 0.0
    for seed in range(10):
        start = time.perf_counter()
        best = find_peak(data, alpha, LangevinParams(seed=seed))[0][1]
        slowest = max(slowest, time.perf_counter() - start)
        hits += best >= 0.8 * grid_max
    ok = hits >= 8 and slowest <= 20
    report(7, ok, f"planted peak: {hits}/10 seeds reach 0.8 x grid max (>= 8), slowest seed {slowest:.2f}s (<= 20s)")
    assert ok


def test_8_spherical_identities():
    rng = np.random.default_rng(8)
    x = random_dataset(rng, 40, 3, sphere=True).points
    tab = harmonic_table(x, 31)
    worst_add = 0.0
    for i in range(0, 40, 2):
        t = float(np.clip(x[i] @ x[i + 1], -1, 1))
        for ell in range(11):
            sl = slice(ell * ell, (ell + 1) ** 2)
            lhs = 4 * math.pi / (2 * ell + 1) * (tab[i, sl] @ np.conj(tab[i + 1, sl]))
            p = np.polynomial.legendre.legval(t, np.eye(ell + 1)[ell])
            worst_add = max(worst_add, abs(lhs - p))
    worst_conj = max(
        np.max(np.abs(tab[:, flat_index(ell, -m)] - np.conj(tab[:, flat_index(ell, m)])))
        for ell in range(32) for m in range(1, ell + 1)
    )
    dims = all(harmonic_dim(3, ell) == 2 * ell + 1 for ell in range(31))
    ok = worst_add <= 1e-10 and worst_conj <= 1e-12 and dims
    report(8, ok, f"addition theorem err {worst_add:.1e} (<= 1e-10), conjugation err {worst_conj:.1e} (<= 1e-12), "
                  f"N(3,l) = 2l+1 for l <= 30: {dims}")
    assert ok


@pytest.mark.slow
def test_9_regret(windmill_full):
    train, _, kernel, *_ = windmill_full
    checkpoints = [10, 50, 100, 250, 500, 1000]
    rows = regret_check(train, kernel, checkpoints, n_comparators=1000, seed=9)
    margins = [played - (best - bound) for _, played, best, bound in rows]
    ok = len(rows) == len(checkpoints) and all(m >= 0 for m in margins)
    worst = min(rows, key=lambda r: r[1] - (r[2] - r[3]))
    report(9, ok, f"regret inequality at T in {checkpoints}: holds at {sum(m >= 0 for m in margins)}/{len(rows)}; "
                  f"tightest T={worst[0]}: played {worst[1]:.1f} >= best {worst[2]:.1f} - bound {worst[3]:.1f}")
    assert ok


def test_10_compare_csv(tmp_path):
    # synthetic stand-in for an image pair: 500 samples, 20 features, nonlinear labels
    rng = np.random.default_rng(10)
    x = rng.standard_normal((500, 20))
    y = np.where(np.sin(2 * x[:, 0]) + x[:, 1] * x[:, 2] > 0, 1.0, -1.0)
    save_csv(Dataset(x, y, Geometry.EUCLIDEAN), tmp_path / "pair.csv")
    cfg = tmp_path / "compare.cfg"
    cfg.write_text(f"data.source=csv\ndata.path={tmp_path / 'pair.csv'}\nlangevin.chains=100\nlangevin.top_k=10\n")
    code = cli.main(["compare", "--config", str(cfg), "--out", str(tmp_path), "--budgets", "50,200"])
    lines = (tmp_path / "compare.tsv").read_text().splitlines() if code == 0 else []
    rows = [line.split("\t") for line in lines if not line.startswith("#")]
    ok = (
        code == 0
        and rows[0] == ["method", "features", "train_acc", "test_acc"]
        and [r[:2] for r in rows[1:]] == [["learned", "50"], ["rbf-rf", "50"], ["learned", "200"], ["rbf-rf", "200"]]
        and all(0 <= float(v) <= 1 for r in rows[1:] for v in r[2:])
    )
    table = "; ".join(f"{r[0]}@{r[1]} test {float(r[3]):.3f}" for r in rows[1:])
    report(10, ok, f"compare on 500-sample CSV: exit {code}, {table}")
    assert ok
