"""Model file: a sectioned, key-annotated text document.

Layout::

    # marginkernel model <version>
    [meta]
    key=value            (geometry, C, rounds, format version)
    [config]
    key=value            (resolved run configuration, informational)
    [measure]
    weight,omega_1,...   (or weight,ell,m) -- the measure CSV block
    [svm]
    bias=<float>
    C=<float>
    weights=<comma separated floats>
    [alpha]
    <one dual weight per line>

Floats are written with 17 significant digits so a load reproduces them bit for bit.
"""

from __future__ import annotations

import numpy as np

from . import __version__
from .dataset import Geometry
from .errors import ConfigError
from .fourier import parse_measure, save_measure
from .game import BoostTrace, LearnedKernel
from .svm import LinearModel

FORMAT_VERSION = 1


def _f(x):
    return "%.17g" % x


def dump_model(kernel: LearnedKernel, model: LinearModel | None = None, config=None) -> str:
    out = [f"# marginkernel model {__version__}", "[meta]"]
    out.append(f"format={FORMAT_VERSION}")
    out.append(f"geometry={kernel.geometry.value}")
    out.append(f"C={_f(kernel.C)}")
    out.append(f"rounds={kernel.rounds}")
    out.append("[config]")
    for k, v in sorted((config or {}).items()):
        out.append(f"{k}={v}")
    out.append("[measure]")
    import io

    buf = io.StringIO()
    save_measure(kernel.measure, buf)
    out.extend(buf.getvalue().splitlines())
    if model is not None:
        out.append("[svm]")
        out.append(f"bias={_f(model.bias)}")
        out.append(f"C={_f(model.C)}")
        out.append("weights=" + ",".join(_f(w) for w in model.weights))
    out.append("[alpha]")
    out.extend(_f(a) for a in kernel.alpha)
    return "\n".join(out) + "\n"


def save_model(path, kernel: LearnedKernel, model: LinearModel | None = None, config=None):
    with open(path, "w") as fh:
        fh.write(dump_model(kernel, model, config))


def _sections(text):
    sections, current = {}, None
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        if line.startswith("[") and line.rstrip().endswith("]"):
            current = line.strip()[1:-1]
            sections[current] = []
        elif current is None:
            raise ConfigError(f"content before first section: {line!r}")
        else:
            sections[current].append(line)
    return sections


def _kv(lines):
    out = {}
    for line in lines:
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"expected key=value, got {line!r}")
        out[key.strip()] = value.strip()
    return out


def parse_model(text):
    """Inverse of :func:`dump_model`.

    Returns ``(kernel, model, config)``; ``model`` is None when the file has no
    ``[svm]`` section. The kernel's trace is empty.
    """
    sec = _sections(text)
    for required in ("meta", "measure", "alpha"):
        if required not in sec:
            raise ConfigError(f"model file lacks [{required}] section")
    meta = _kv(sec["meta"])
    if int(meta.get("format", -1)) != FORMAT_VERSION:
        raise ConfigError(f"unsupported model format {meta.get('format')!r}")
    measure = parse_measure(sec["measure"])
    rounds = int(meta["rounds"])
    counts = np.rint(measure.weights * rounds)
    kernel = LearnedKernel(
        modes=measure.modes,
        counts=counts,
        geometry=Geometry(meta["geometry"]),
        trace=BoostTrace(),
        alpha=np.array([float(v) for v in sec["alpha"]]),
        C=float(meta["C"]),
    )
    model = None
    if "svm" in sec:
        s = _kv(sec["svm"])
        weights = np.array([float(v) for v in s["weights"].split(",")]) if s["weights"] else np.empty(0)
        model = LinearModel(weights, float(s["bias"]), float(s["C"]))
    return kernel, model, _kv(sec.get("config", []))


def load_model(path):
    with open(path) as fh:
        return parse_model(fh.read())
