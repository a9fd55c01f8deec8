"""Compiled-in model configurations for the 16 two- and three-body systems.

Five presets carry published parameter sets and initial data (marked
``published=True``). The other eleven reuse the initial data of their family
with the rates noted in ``source``. ``period`` is the zero period over which
the preset returns to its start (for the damped family, the period it
approaches); ``t_end`` covers one such period, or 30 for the damped family.

Presets integrate at ``rel_tol=1e-12``: one of the three-body orbits swings
out to |x| ~ 4e4, and at the library default its error there reaches 1e-3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .integrator import IntegratorSettings
from .laws import CoefficientLaw, LawKind, ModelSpec
from .polynomial import ZeroState

TWO_PI = 2.0 * math.pi
PRESET_INTEGRATOR = IntegratorSettings(rel_tol=1e-12, abs_tol=1e-14)


@dataclass(frozen=True)
class Preset:
    name: str
    spec: ModelSpec
    initial: ZeroState
    t_end: float
    samples: int
    published: bool
    source: str
    period: float = None
    asymptotic: bool = False
    integrator: IntegratorSettings = None

    @property
    def t_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.samples)


def _lv(r):
    return CoefficientLaw(LawKind.LINEAR_VELOCITY, r=Fraction(r), omega=TWO_PI)


def _ho(r):
    return CoefficientLaw(LawKind.HARMONIC, r=Fraction(r), omega=TWO_PI)


def _damp(a):
    return CoefficientLaw(LawKind.DAMPED, a=a, omega=TWO_PI)


# initial data per example family, (x1, v1, x2, v2)
_IC_31 = ZeroState(0.90 - 0.19j, (1.96 + 1.75j,), 0.085 - 0.37j, (-0.34 + 2.14j,))
_IC_32 = ZeroState(-2.4 - 1.21j, (4.89 + 2.42j,), -6.82 - 3.92j, (-6.81 - 2.44j,))
_IC_33 = ZeroState(0.94 - 0.28j, (1.40 + 1.11j,), -0.38 - 4.68j, (-9.20 + 2.50j,))
_IC_34 = ZeroState(1.21 + 0j, (1.42 + 0.89j,), -0.56 - 2.34j, (-1.78 - 0.54j,))
_IC_35 = ZeroState(1.74 + 1.42j, (-3.20 + 0.52j, 0.44 - 3.15j),
                   12.47 + 4.46j, (-10.23 + 6.40j, 3.16 - 14.66j))

_HALF, _THIRD, _TWO_THIRDS, _SIXTH = Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 6)


def _make():
    table = []

    def add(name, N, mbar, laws, ic, t_end, published, source, period=None,
            asymptotic=False, step=0.005):
        spec = ModelSpec(N, mbar, laws)
        samples = int(round(t_end / step)) + 1
        table.append(Preset(name, spec, ic, float(t_end), samples, published, source,
                            period, asymptotic, PRESET_INTEGRATOR))

    # y'' = i r w y'
    add("example-3.1.1", 2, 3, {1: _lv(_HALF), 2: _lv(_THIRD)}, _IC_31, 12, True,
        "published rates and initial data; zeros return after 12", 12)
    add("example-3.1.2", 2, 2, {1: _lv(_HALF), 3: _lv(_THIRD)}, _IC_31, 12, False,
        "r1=1/2, r3=1/3 with the linear-velocity family initial data (chosen here)", 12)
    add("example-3.1.3", 2, 1, {2: _lv(_THIRD), 3: _lv(_HALF)}, _IC_31, 12, False,
        "r2=1/3, r3=1/2 with the linear-velocity family initial data (chosen here)", 12)

    # y'' = -(r w)^2 y
    add("example-3.2.1", 2, 3, {1: _ho(_HALF), 2: _ho(_THIRD)}, _IC_32, 6, True,
        "published rates and initial data; zeros return after 6", 6)
    add("example-3.2.2", 2, 2, {1: _ho(_HALF), 3: _ho(_THIRD)}, _IC_32, 18, False,
        "r1=1/2, r3=1/3 with the harmonic family initial data (chosen here)", 18)
    add("example-3.2.3", 2, 1, {2: _ho(_THIRD), 3: _ho(_HALF)}, _IC_32, 6, False,
        "r2=1/3, r3=1/2 with the harmonic family initial data (chosen here)", 6)

    # one harmonic, one linear-velocity coefficient
    add("example-3.3.1", 2, 3, {1: _ho(_HALF), 2: _lv(_THIRD)}, _IC_33, 6, False,
        "r1=1/2, r2=1/3 with the hybrid family initial data (chosen here)", 6)
    add("example-3.3.2", 2, 2, {1: _ho(_HALF), 3: _lv(_THIRD)}, _IC_33, 6, False,
        "r1=1/2, r3=1/3 with the hybrid family initial data (chosen here)", 6)
    add("example-3.3.3", 2, 1, {2: _ho(_THIRD), 3: _lv(_HALF)}, _IC_33, 6, True,
        "published rates and initial data; zeros return after 6", 6)

    # harmonic plus damped: asymptotically isochronous with period 3
    a = 0.1
    add("example-3.4.1", 2, 3, {1: _ho(_THIRD), 2: _damp(a)}, _IC_34, 30, False,
        "r=1/3, a=0.1 with the damped family initial data (chosen here)",
        3, asymptotic=True)
    add("example-3.4.2", 2, 2, {1: _ho(_THIRD), 3: _damp(a)}, _IC_34, 30, True,
        "published rates and initial data", 3, asymptotic=True)
    add("example-3.4.3", 2, 1, {2: _ho(_THIRD), 3: _damp(a)}, _IC_34, 30, False,
        "r=1/3, a=0.1 with the damped family initial data (chosen here)",
        3, asymptotic=True)

    # N = 3, all harmonic
    rates = {1: _HALF, 2: _THIRD, 3: _SIXTH, 4: _TWO_THIRDS}
    periods = {1: 12, 2: 12, 3: 6, 4: 18}
    for mbar in (1, 2, 3, 4):
        laws = {m: _ho(r) for m, r in rates.items() if m != mbar}
        if mbar == 3:
            source = "published rates and initial data; zeros return after 6"
        else:
            source = ("r1=1/2, r2=1/3, r3=1/6, r4=2/3 (r3 chosen here) with the "
                      "three-body initial data")
        add(f"example-3.5-mbar{mbar}", 3, mbar, laws, _IC_35, periods[mbar], mbar == 3,
            source, periods[mbar])
    return {p.name: p for p in table}


PRESETS = _make()

ALIASES = {f"example-3.5.{5 - m}": f"example-3.5-mbar{m}" for m in (1, 2, 3, 4)}


def get_preset(name: str) -> Preset:
    key = ALIASES.get(name, name)
    if key not in PRESETS:
        raise KeyError(name)
    return PRESETS[key]


def preset_names() -> list:
    return sorted(PRESETS)
