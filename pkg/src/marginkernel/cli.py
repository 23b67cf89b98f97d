"""Command-line entry point: ``marginkernel {train,compare,landscape}``.

Exit codes: 0 success, 1 runtime failure, 2 configuration error, 3 data error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__
from .baselines import RbfParams, rbf_random_features
from .config import RunConfig, load_config
from .dataset import Dataset, Geometry, gen_sphere_checkerboard, gen_windmill, load_csv, train_test_split
from .errors import (
    ConfigError,
    DataError,
    DimensionMismatch,
    UnsupportedDimension,
)
from .fourier import feature_map, potential_batch
from .game import boost
from .modelio import load_model, save_model
from .svm import accuracy, margin, train_linear_svm

log = logging.getLogger("marginkernel")

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG, EXIT_DATA = 0, 1, 2, 3


def _f(x):
    return "%.17g" % x


def provenance(config: RunConfig) -> str:
    return f"# marginkernel {__version__} config: {config.describe()}"


def load_data(config: RunConfig):
    """Materialize ``(train, test)`` for a config.

    Generators draw the training set with ``data.seed`` and the test set with
    ``data.seed + 1``. A CSV source uses ``data.test_path`` when given, and
    otherwise a random split with ``data.n_train`` training rows, falling back
    to 70 % when the file has no more than ``n_train`` rows.
    """
    src = config.data
    if src.source == "windmill":
        kw = dict(blades=src.blades, radius=src.radius, noise=src.noise)
        return (
            gen_windmill(src.n_train, seed=src.seed, **kw),
            gen_windmill(src.n_test, seed=src.seed + 1, **kw),
        )
    if src.source == "checkerboard":
        return (
            gen_sphere_checkerboard(src.n_train, bands=src.bands, seed=src.seed),
            gen_sphere_checkerboard(src.n_test, bands=src.bands, seed=src.seed + 1),
        )
    geometry = Geometry(src.geometry)
    data = load_csv(src.path, geometry)
    if src.test_path:
        test = load_csv(src.test_path, geometry)
        if test.d != data.d:
            raise DimensionMismatch(f"test file has d={test.d}, training file d={data.d}")
        return data, test
    n_train = src.n_train if src.n_train < data.n else int(round(0.7 * data.n))
    if n_train < 2 or n_train >= data.n:
        raise DataError(f"cannot split {data.n} rows into train and test")
    return train_test_split(data, n_train, seed=src.seed)


def _learn(config: RunConfig, train: Dataset):
    kernel, features = boost(
        train,
        C=config.C,
        T=config.T,
        params=config.langevin,
        ell_max=config.ell_max,
        step_multiplier=config.step_multiplier,
    )
    model = train_linear_svm(features, train.labels, C=config.C, tol=config.svm_tol, seed=config.seed)
    return kernel, features, model


def write_trace(path, kernel, config):
    trace = kernel.trace
    if kernel.spherical:
        mode_cols = ["ell", "m"]
    else:
        mode_cols = [f"omega_{i + 1}" for i in range(len(trace.modes[0]))]
    with open(path, "w") as fh:
        fh.write(provenance(config) + "\n")
        fh.write(",".join(["t", "v_t", "F_t", "eta_t", *mode_cols]) + "\n")
        for t, (mode, v, F, eta) in enumerate(
            zip(trace.modes, trace.values, trace.objectives, trace.steps), start=1
        ):
            if kernel.spherical:
                cells = [str(int(c)) for c in mode]
            else:
                cells = [_f(c) for c in mode]
            fh.write(",".join([str(t), _f(v), _f(F), _f(eta), *cells]) + "\n")


def cmd_train(config: RunConfig, out: str):
    os.makedirs(out, exist_ok=True)
    train, test = load_data(config)
    start = time.perf_counter()
    kernel, features, model = _learn(config, train)
    wall = time.perf_counter() - start
    test_features = kernel.transform(test.points)
    metrics = {
        "train_acc": accuracy(model, features, train.labels),
        "test_acc": accuracy(model, test_features, test.labels),
        "margin": margin(model, features, train.labels),
        "atoms": len(kernel.modes),
        "rounds": kernel.rounds,
        "wall_time_s": wall,
    }
    save_model(os.path.join(out, "model.txt"), kernel, model, dict(config.items()))
    write_trace(os.path.join(out, "trace.csv"), kernel, config)
    with open(os.path.join(out, "metrics.txt"), "w") as fh:
        fh.write(provenance(config) + "\n")
        for key, value in metrics.items():
            fh.write(f"{key}={value}\n")
    print(f"train_acc={metrics['train_acc']:.4f} test_acc={metrics['test_acc']:.4f} "
          f"atoms={metrics['atoms']} wall={wall:.1f}s")
    return metrics


def cmd_compare(config: RunConfig, budgets, out: str):
    """Learned kernel with ``m/2`` rounds against ``m/2`` RBF frequency pairs."""
    os.makedirs(out, exist_ok=True)
    train, test = load_data(config)
    rows = []
    for m in budgets:
        if m < 2 or m % 2:
            raise ConfigError(f"feature budget {m} must be an even count >= 2")
        half = m // 2
        cfg = replace(config, T=half)
        kernel, features, model = _learn(cfg, train)
        rows.append(("learned", m, accuracy(model, features, train.labels),
                     accuracy(model, kernel.transform(test.points), test.labels)))
        rbf_train, omegas = rbf_random_features(train, RbfParams(m=half, seed=config.seed))
        model = train_linear_svm(rbf_train, train.labels, C=config.C, tol=config.svm_tol, seed=config.seed)
        rows.append(("rbf-rf", m, accuracy(model, rbf_train, train.labels),
                     accuracy(model, feature_map(test.points, omegas), test.labels)))
    path = os.path.join(out, "compare.tsv")
    with open(path, "w") as fh:
        fh.write(provenance(config) + "\n")
        fh.write("method\tfeatures\ttrain_acc\ttest_acc\n")
        for method, m, tr, te in rows:
            fh.write(f"{method}\t{m}\t{tr:.6f}\t{te:.6f}\n")
    for method, m, tr, te in rows:
        print(f"{method}\t{m}\t{tr:.4f}\t{te:.4f}")
    return rows


def parse_grid(text):
    try:
        lo, hi, steps = text.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError as exc:
        raise ConfigError(f"--grid expects lo:hi:steps, got {text!r}") from exc
    if steps < 1 or hi < lo:
        raise ConfigError(f"--grid needs steps >= 1 and hi >= lo, got {text!r}")
    return lo, hi, steps


def cmd_landscape(config: RunConfig, grid, alpha_source: str, out: str):
    """Fourier potential over a square grid of 2-D frequencies."""
    os.makedirs(out, exist_ok=True)
    train, _ = load_data(config)
    if train.d != 2 or train.geometry is Geometry.SPHERE:
        raise UnsupportedDimension(f"landscape export needs planar 2-D data, got d={train.d}")
    if alpha_source == "uniform":
        alpha = np.ones(train.n)
    else:
        if not os.path.exists(alpha_source):
            raise ConfigError(f"model file not found: {alpha_source}")
        alpha = load_model(alpha_source)[0].alpha
        if alpha.shape[0] != train.n:
            raise DimensionMismatch(f"model has {alpha.shape[0]} dual weights, data has {train.n} rows")
    lo, hi, steps = grid
    axis = np.linspace(lo, hi, steps)
    w1, w2 = np.meshgrid(axis, axis, indexing="ij")
    omegas = np.column_stack([w1.ravel(), w2.ravel()])
    values, _ = potential_batch(train, alpha, omegas)
    with open(os.path.join(out, "landscape.csv"), "w") as fh:
        fh.write(provenance(config) + f" alpha={alpha_source}\n")
        fh.write("omega_1,omega_2,v\n")
        for (a, b), v in zip(omegas, values):
            fh.write(f"{_f(a)},{_f(b)},{_f(v)}\n")
    return omegas, values


def build_parser():
    parser = argparse.ArgumentParser(prog="marginkernel", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="key=value run configuration")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, help="override every seed in the config")
        p.add_argument("-v", "--verbose", action="store_true")

    common(sub.add_parser("train", help="learn a kernel and fit the SVM"))
    p = sub.add_parser("compare", help="learned kernel vs RBF random features")
    common(p)
    p.add_argument("--budgets", default="100", help="comma separated feature counts")
    p = sub.add_parser("landscape", help="export the Fourier potential on a 2-D grid")
    common(p)
    p.add_argument("--grid", default="-10:10:101", help="lo:hi:steps per axis")
    p.add_argument("--alpha", default="uniform", help="'uniform' or a model file")
    return parser


def _run(args):
    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    if args.command == "train":
        cmd_train(config, args.out)
    elif args.command == "compare":
        try:
            budgets = [int(b) for b in args.budgets.split(",") if b.strip()]
        except ValueError as exc:
            raise ConfigError(f"--budgets expects integers, got {args.budgets!r}") from exc
        if not budgets:
            raise ConfigError("--budgets is empty")
        cmd_compare(config, budgets, args.out)
    else:
        cmd_landscape(config, parse_grid(args.grid), args.alpha, args.out)


def _join_grid(argv):
    # "--grid -1:1:3" would otherwise read as an unknown option
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--grid" and i + 1 < len(argv):
            out.append("--grid=" + argv[i + 1])
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_grid(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, DimensionMismatch, UnsupportedDimension, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001 - last-resort mapping to exit 1
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
