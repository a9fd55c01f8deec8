"""Run configuration: a JSON document describing model, initial data and grid.

Example::

    {
      "name": "my-run",
      "model": {"N": 2, "mbar": 3, "omega": 6.283185307179586,
                "laws": {"1": {"law": "harmonic", "r": "1/2"},
                         "2": {"law": "damped", "a": 0.1}}},
      "initial": {"x": [[1.21, 0.0], [1.42, 0.89]],
                  "v": [[-0.56, -2.34], [-1.78, -0.54]]},
      "grid": {"t_end": 6.0, "samples": 1201},
      "integrator": {"rel_tol": 1e-10},
      "period": {"T": null, "k_max": null, "tol": 1e-5},
      "outputs": {"dir": "out", "format": "csv"}
    }

Positions and velocities are ``[re, im]`` pairs, the double zero first.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConfigError, SingularConfigurationError
from .integrator import IntegratorSettings
from .laws import CoefficientLaw, LawKind, ModelSpec, parse_rational
from .polynomial import ZeroState

FORMATS = ("csv", "json")
_LAW_NAMES = {kind.name.lower(): kind for kind in LawKind}


@dataclass(frozen=True)
class PeriodSettings:
    T: Optional[float] = None  # shift between compared states; None picks one from the model
    k_max: Optional[int] = None
    tol: float = 1e-5


@dataclass(frozen=True)
class RunConfig:
    name: str
    model: ModelSpec
    initial: ZeroState
    t_end: float
    samples: int
    integrator: IntegratorSettings = field(default_factory=IntegratorSettings)
    period: PeriodSettings = field(default_factory=PeriodSettings)
    out_dir: str = "out"
    fmt: str = "csv"

    def __post_init__(self):
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise ConfigError("t_end must be a positive number", field="grid.t_end")
        if not isinstance(self.samples, int) or self.samples < 2:
            raise ConfigError("samples must be an integer >= 2", field="grid.samples")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}", field="outputs.format")
        if self.initial.N != self.model.N:
            raise ConfigError(f"initial data has {self.initial.N} zeros, model N={self.model.N}",
                              field="initial")

    @property
    def t_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.samples)


def _complex_pair(value, where):
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(c, (int, float)) for c in value)):
        raise ConfigError(f"expected a [re, im] pair, got {value!r}", field=where)
    return complex(float(value[0]), float(value[1]))


def _pair(z: complex) -> list:
    return [z.real, z.imag]


def _require(d, key, where):
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be an object", field=where)
    if key not in d:
        raise ConfigError(f"missing {where}.{key}", field=f"{where}.{key}")
    return d[key]


def _parse_law(m, entry, omega):
    where = f"model.laws.{m}"
    name = _require(entry, "law", where)
    kind = _LAW_NAMES.get(str(name).lower())
    if kind is None:
        raise ConfigError(f"unknown law {name!r}; known: {sorted(_LAW_NAMES)}",
                          field=f"{where}.law")
    try:
        if kind in (LawKind.LINEAR_VELOCITY, LawKind.HARMONIC):
            return CoefficientLaw(kind, r=parse_rational(_require(entry, "r", where)),
                                  omega=omega)
        if kind is LawKind.DAMPED:
            return CoefficientLaw(kind, a=float(_require(entry, "a", where)), omega=omega)
        return CoefficientLaw(kind, omega=omega)
    except ConfigError as exc:
        raise ConfigError(str(exc), field=f"{where}.{exc.field}") from None


def _parse_model(d) -> ModelSpec:
    N = _require(d, "N", "model")
    mbar = _require(d, "mbar", "model")
    omega = float(d.get("omega", 2.0 * math.pi))
    laws = _require(d, "laws", "model")
    if not isinstance(laws, dict):
        raise ConfigError("model.laws must map indices to laws", field="model.laws")
    try:
        parsed = {int(m): _parse_law(m, entry, omega) for m, entry in laws.items()}
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"law indices must be integers: {exc}", field="model.laws") from None
    try:
        return ModelSpec(N, mbar, parsed)
    except ConfigError as exc:
        raise ConfigError(str(exc), field=f"model.{exc.field}") from None


def _parse_initial(d) -> ZeroState:
    xs = [_complex_pair(p, "initial.x") for p in _require(d, "x", "initial")]
    vs = [_complex_pair(p, "initial.v") for p in _require(d, "v", "initial")]
    if len(xs) != len(vs) or len(xs) < 2:
        raise ConfigError("initial.x and initial.v need the same length >= 2", field="initial")
    try:
        return ZeroState.from_arrays(xs, vs)
    except SingularConfigurationError as exc:
        raise ConfigError(f"degenerate initial data: {exc}", field="initial") from None


def _parse_dataclass(cls, d, where):
    if d is None:
        return cls()
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be an object", field=where)
    known = {f.name for f in fields(cls)}
    unknown = set(d) - known
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}", field=where)
    values = {k: (math.inf if v is None and k == "max_step" else v) for k, v in d.items()}
    try:
        return cls(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}", field=where) from None


def from_dict(d: dict) -> RunConfig:
    """Validate and build a :class:`RunConfig`; errors name the offending field."""
    if not isinstance(d, dict):
        raise ConfigError("configuration must be a JSON object")
    grid = _require(d, "grid", "config")
    outputs = d.get("outputs") or {}
    t_end = _require(grid, "t_end", "grid")
    samples = _require(grid, "samples", "grid")
    if not isinstance(t_end, (int, float)):
        raise ConfigError("t_end must be a number", field="grid.t_end")
    return RunConfig(
        name=str(d.get("name", "run")),
        model=_parse_model(_require(d, "model", "config")),
        initial=_parse_initial(_require(d, "initial", "config")),
        t_end=float(t_end),
        samples=samples,
        integrator=_parse_dataclass(IntegratorSettings, d.get("integrator"), "integrator"),
        period=_parse_dataclass(PeriodSettings, d.get("period"), "period"),
        out_dir=str(outputs.get("dir", "out")),
        fmt=str(outputs.get("format", "csv")),
    )


def _law_dict(law: CoefficientLaw) -> dict:
    out = {"law": law.kind.name.lower()}
    if law.kind is LawKind.DAMPED:
        out["a"] = law.a
    elif law.kind is not LawKind.FROZEN:
        out["r"] = str(law.r)
    return out


def to_dict(cfg: RunConfig) -> dict:
    integ = asdict(cfg.integrator)
    if math.isinf(integ["max_step"]):
        integ["max_step"] = None
    return {
        "name": cfg.name,
        "model": {"N": cfg.model.N, "mbar": cfg.model.mbar, "omega": cfg.model.omega,
                  "laws": {str(m): _law_dict(law) for m, law in cfg.model.laws.items()}},
        "initial": {"x": [_pair(z) for z in cfg.initial.positions],
                    "v": [_pair(z) for z in cfg.initial.velocities]},
        "grid": {"t_end": cfg.t_end, "samples": cfg.samples},
        "integrator": integ,
        "period": asdict(cfg.period),
        "outputs": {"dir": cfg.out_dir, "format": cfg.fmt},
    }


def load(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}", field="config") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})", field="config") from None
    return from_dict(data)


def dump(cfg: RunConfig, path) -> None:
    Path(path).write_text(json.dumps(to_dict(cfg), indent=2) + "\n", encoding="utf-8")


def from_preset(preset) -> RunConfig:
    return RunConfig(name=preset.name, model=preset.spec, initial=preset.initial,
                     t_end=preset.t_end, samples=preset.samples,
                     integrator=preset.integrator or IntegratorSettings())
