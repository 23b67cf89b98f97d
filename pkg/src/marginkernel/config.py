"""Flat ``key=value`` run configuration with dotted sections.

Example::

    data.source = windmill
    data.n_train = 2000
    T = 300
    langevin.chains = 100
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace

from .errors import ConfigError
from .langevin import LangevinParams


@dataclass(frozen=True)
class DataSpec:
    source: str = "windmill"  # windmill | checkerboard | csv
    path: str | None = None
    test_path: str | None = None
    geometry: str = "euclidean"
    n_train: int = 2000
    n_test: int = 10000
    blades: int = 4
    radius: float = 1.0
    noise: float = 0.0
    bands: int = 4
    seed: int = 0


@dataclass(frozen=True)
class RunConfig:
    data: DataSpec = field(default_factory=DataSpec)
    branch: str | None = None  # translation | rotation; inferred from geometry when unset
    C: float = 1.0
    T: int = 100
    step_multiplier: float = 1.0
    ell_max: int = 31
    svm_tol: float = 1e-3
    langevin: LangevinParams = field(default_factory=LangevinParams)
    seed: int = 0

    def with_seed(self, seed):
        return replace(
            self,
            seed=seed,
            data=replace(self.data, seed=seed),
            langevin=replace(self.langevin, seed=seed),
        )

    @property
    def resolved_branch(self):
        if self.branch:
            return self.branch
        sphere = self.data.source == "checkerboard" or self.data.geometry == "sphere"
        return "rotation" if sphere else "translation"

    def validate(self):
        if self.data.source not in ("windmill", "checkerboard", "csv"):
            raise ConfigError(f"unknown data.source {self.data.source!r}")
        if self.data.source == "csv" and not self.data.path:
            raise ConfigError("data.source=csv needs data.path")
        if self.data.source != "csv" and self.data.path:
            raise ConfigError("data.path is only valid with data.source=csv")
        if self.data.geometry not in ("euclidean", "sphere"):
            raise ConfigError(f"unknown data.geometry {self.data.geometry!r}")
        if self.resolved_branch not in ("translation", "rotation"):
            raise ConfigError(f"unknown branch {self.branch!r}")
        sphere_data = self.data.source == "checkerboard" or self.data.geometry == "sphere"
        if (self.resolved_branch == "rotation") != sphere_data:
            raise ConfigError("rotation branch needs sphere data and vice versa")
        if self.T < 1 or self.C <= 0:
            raise ConfigError("need T >= 1 and C > 0")
        return self

    def items(self):
        """Fully resolved flat ``(key, value)`` pairs, sorted."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name in ("data", "langevin"):
                for g in fields(value):
                    out[f"{f.name}.{g.name}"] = getattr(value, g.name)
            else:
                out[f.name] = value
        out["branch"] = self.resolved_branch
        return sorted(out.items())

    def describe(self):
        return ";".join(f"{k}={v}" for k, v in self.items())


_TOP = {f.name: f.type for f in fields(RunConfig) if f.name not in ("data", "langevin")}
_SECTIONS = {"data": DataSpec, "langevin": LangevinParams}


def _convert(raw, default, key):
    if raw.lower() in ("none", "null", ""):
        return None
    try:
        if isinstance(default, bool):
            return raw.lower() in ("1", "true", "yes")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw!r}") from exc
    return raw


def _float_or_none(raw, key):
    if raw.lower() in ("none", "null", ""):
        return None
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw!r}") from exc


def parse_config(text) -> RunConfig:
    """Parse the key=value format; unknown keys raise :class:`ConfigError`."""
    top, sections = {}, {name: {} for name in _SECTIONS}
    base = RunConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, raw = key.strip(), raw.strip()
        section, dot, name = key.partition(".")
        if dot:
            if section not in _SECTIONS:
                raise ConfigError(f"line {lineno}: unknown section {section!r}")
            defaults = getattr(base, section)
            if name not in {f.name for f in fields(defaults)}:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            default = getattr(defaults, name)
            if default is None:
                value = raw if name in ("path", "test_path") else _float_or_none(raw, key)
            else:
                value = _convert(raw, default, key)
            sections[section][name] = value
        else:
            if key not in _TOP:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            default = getattr(base, key)
            top[key] = raw if default is None else _convert(raw, default, key)
    try:
        data = DataSpec(**sections["data"])
        langevin = LangevinParams(**sections["langevin"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(data=data, langevin=langevin, **top).validate()


def load_config(path) -> RunConfig:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path) as fh:
        return parse_config(fh.read())
