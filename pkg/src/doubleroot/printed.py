"""Expanded closed-form right-hand sides of the two- and three-body systems.

Each entry is written out term by term in its expanded textbook form,
independent of the generic formulas in :mod:`doubleroot.zeros`, so the two
can check each other. Where the expanded form disagrees with the generic one,
the entry keeps it verbatim under ``printed`` and supplies the minimally
corrected form under ``corrected`` together with a one-line ``erratum``.

Every RHS has the signature ``f(x, v, p) -> [x1'', x2'', ...]`` where ``p`` is
a mapping with keys among ``r1..r4``, ``r``, ``a``, ``omega``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .laws import CoefficientLaw, LawKind, ModelSpec, parse_rational

I = 1j


# ---- y'' = i r w y' ------------------------------------------------------

def _sys_3_1_1(x, v, p):
    x1, x2 = x
    d1, d2 = v
    r1, r2, w = p["r1"], p["r2"], p["omega"]
    a1 = 1 / (x1 - x2) * (
        d1 * (-I * r2 * w * x2 + d1 + 2 * d2)
        + I * w * x1 * ((2 * r1 - r2) * d1 + (r1 - r2) * d2))
    a2 = -I / (x1 - x2) * (
        -2 * I * d1 * (d1 + 2 * d2) + w * x2 * (2 * (r1 - r2) * d1 + r1 * d2)
        + w * x1 * (2 * (r1 - r2) * d1 + (r1 - 2 * r2) * d2))
    return np.array([a1, a2])


def _sys_3_1_2(x, v, p):
    x1, x2 = x
    d1, d2 = v
    r1, r3, w = p["r1"], p["r3"], p["omega"]
    a1 = 1 / (2 * x1 * (x1 - x2)) * (
        2 * x2 * d1**2 + 2 * x1 * d1 * (-I * r3 * w * x2 + 2 * d2)
        + I * w * (x1)**2 * (2 * r1 * d1 + (r1 - r3) * d2))
    a2 = I / (x1 * (x1 - x2)) * (
        2 * I * x2 * (d1)**2 + r3 * w * x1**2 * d2 + 4 * I * x1 * d1 * d2
        - w * x1 * x2 * (2 * (r1 - r3) * d1 + r1 * d2))
    return np.array([a1, a2])


def _sys_3_1_3(x, v, p):
    x1, x2 = x
    d1, d2 = v
    r2, r3, w = p["r2"], p["r3"], p["omega"]
    a1 = I / (x1 * (x1 - x2)) * (
        -2 * I * x2 * (d1)**2
        + x1 * d1 * ((r2 - 2 * r3) * w * x2 + I * (d1 - 2 * d2))
        + w * (x1)**2 * (r2 * d1 + (r2 - r3) * d2))
    a2 = I / ((x1)**2 * (x1 - x2)) * (
        2 * (-r2 + r3) * w * x1 * (x2)**2 * d1 + 2 * I * (x2)**2 * (d1)**2
        + r3 * w * (x1)**3 * d2
        + 4 * I * (x1)**2 * d1 * d2
        + w * (x1)**2 * x2 * (-2 * (r2 - r3) * d1 + (-2 * r2 + r3) * d2))
    return np.array([a1, a2])


def _equal_lv_a(x, v, p):
    x1, x2 = x
    d1, d2 = v
    r, w = p["r"], p["omega"]
    a1 = (x1 - x2)**-1 * d1 * (d1 + 2 * d2) + I * w * r * d1
    a2 = -2 * (x1 - x2)**-1 * d1 * (d1 + 2 * d2) + I * w * r * d2
    return np.array([a1, a2])


def _equal_lv_b(x, v, p):
    x1, x2 = x
    d1, d2 = v
    r, w = p["r"], p["omega"]
    a1 = (x1 * (x1 - x2))**-1 * d1 * (d1 * x2 + 2 * d2 * x1) + I * w * r * d1
    a2 = -2 * (x1 * (x1 - x2))**-1 * d1 * (d1 * x2 + 2 * d2 * x1) + I * w * r * d2
    return np.array([a1, a2])


def _equal_lv_c(x, v, p):
    x1, x2 = x
    d1, d2 = v
    r, w = p["r"], p["omega"]
    a1 = -(x1 * (x1 - x2))**-1 * d1 * (d1 * (x1 - 2 * x2) - 2 * d2 * x1) + I * w * r * d1
    a2 = -2 * (x1**2 * (x1 - x2))**-1 * d1 * (d1 * x2**2 + 2 * d2 * x1**2) + I * w * r * d2
    return np.array([a1, a2])


# ---- y'' = -(r w)^2 y --------------------------------------------------

def _sys_3_2_1(x, v, p, sign=+1):
    x1, x2 = x
    d1, d2 = v
    r1, r2, w = p["r1"], p["r2"], p["omega"]
    a1 = (w**2 * x1 * ((-4 * r1**2 + r2**2) * x1 + 2 * (-r1**2 + r2**2) * x2)
          + 2 * d1 * (d1 + 2 * d2)) / (2 * (x1 - x2))
    a2 = (w**2 * x1 * ((2 * r1**2 - r2**2) * x1 + (3 * r1**2 - 2 * r2**2) * x2)
          + r1**2 * w**2 * x2**2 + sign * 2 * d1 * (d1 + 2 * d2)) / (x1 - x2)
    return np.array([a1, a2])


def _sys_3_2_2(x, v, p, sign=+1):
    x1, x2 = x
    d1, d2 = v
    r1, r3, w = p["r1"], p["r3"], p["omega"]
    a1 = (w**2 * x1**2 * (-2 * r1**2 * x1 + (-r1**2 + r3**2) * x2)
          + 2 * d1 * (x2 * d1 + 2 * x1 * d2)) / (2 * x1 * (x1 - x2))
    a2 = sign * (w**2 * x1 * x2 * (r3**2 * x1 - r1**2 * (2 * x1 + x2))
                 + 2 * d1 * (x2 * d1 + 2 * x1 * d2)) / (x1 * (x1 - x2))
    return np.array([a1, a2])


def _sys_3_2_3(x, v, p):
    x1, x2 = x
    d1, d2 = v
    r2, r3, w = p["r2"], p["r3"], p["omega"]
    a1 = (w**2 * x1**2 * (-r2**2 * x1 + 2 * (-r2**2 + r3**2) * x2)
          + 2 * d1 * (2 * x2 * d1 - x1 * (d1 - 2 * d2))) / (2 * x1 * (x1 - x2))
    a2 = (w**2 * x1**2 * x2 * ((r2**2 - r3**2) * x1 + (2 * r2**2 - r3**2) * x2)
          - 2 * d1 * (x2**2 * d1 + 2 * x1**2 * d2)) / (x1**2 * (x1 - x2))
    return np.array([a1, a2])


def _equal_ho_a(x, v, p, sign=+1):
    x1, x2 = x
    d1, d2 = v
    r, w = p["r"], p["omega"]
    a1 = (2 * (x1 - x2))**-1 * (-3 * w**2 * r**2 * x1**2 + 2 * d1 * (d1 + 2 * d2))
    a2 = (x1 - x2)**-1 * (w**2 * r**2 * (x1**2 + x1 * x2 + x2**2)
                          + sign * 2 * d1 * (d1 + 2 * d2))
    return np.array([a1, a2])


def _equal_ho_b(x, v, p, corrected=False):
    x1, x2 = x
    d1, d2 = v
    r, w = p["r"], p["omega"]
    a1 = (2 * x1 * (x1 - x2))**-1 * (-2 * w**2 * r**2 * x1**3
                                      + 2 * d1 * (x2 * d1 + 2 * x1 * d2))
    if corrected:
        a2 = (x1 * (x1 - x2))**-1 * (w**2 * r**2 * x1 * x2 * (x1 + x2)
                                      - 2 * d1 * (x2 * d1 + 2 * x1 * d2))
    else:
        a2 = (x1 * (x1 - x2))**-1 * (w**2 * r**2 * x1 * x2 * (x2 - x1)
                                      + 2 * d1 * (x2 * d1 + 2 * x1 * d2))
    return np.array([a1, a2])


def _equal_ho_c(x, v, p):
    x1, x2 = x
    d1, d2 = v
    r, w = p["r"], p["omega"]
    a1 = (2 * x1 * (x1 - x2))**-1 * (-w**2 * r**2 * x1**3
                                      + 2 * d1 * (2 * x2 * d1 - x1 * d1 + 2 * x1 * d2))
    a2 = (x1**2 * (x1 - x2))**-1 * (w**2 * r**2 * x1**2 * x2**2
                                     - 2 * d1 * (x2**2 * d1 + 2 * x1**2 * d2))
    return np.array([a1, a2])


# ---- harmonic y_j, linear-velocity y_k ----------------------------------

def _sys_3_3_1(x, v, p):
    x1, x2 = x
    d1, d2 = v
    r1, r2, w = p["r1"], p["r2"], p["omega"]
    a1 = 1 / (x1 - x2) * (
        d1 * (d1 + 2 * d2) - (r1)**2 * w**2 * x1 * (2 * x1 + x2)
        - I * r2 * w * (d1 * (x1 + x2) + d2 * x1))
    a2 = 1 / (x1 - x2) * (
        -2 * d1 * (d1 + 2 * d2) + (r1)**2 * w**2 * (x1 + x2) * (2 * x1 + x2)
        + 2 * I * r2 * w * (d1 * (x1 + x2) + d2 * x1))
    return np.array([a1, a2])


def _sys_3_3_2(x, v, p):
    x1, x2 = x
    d1, d2 = v
    r1, r3, w = p["r1"], p["r3"], p["omega"]
    a1 = (2 * x1 * (x1 - x2))**-1 * (
        2 * d1 * (d1 * x2 + 2 * d2 * x1) - (r1)**2 * w**2 * x1**2 * (2 * x1 + x2)
        - I * r3 * w * x1 * (2 * d1 * x2 + d2 * x1))
    a2 = (x1 * (x1 - x2))**-1 * (
        -2 * d1 * (d1 * x2 + 2 * d2 * x1) + (r1)**2 * w**2 * x1 * x2 * (2 * x1 + x2)
        + I * r3 * w * x1 * (2 * d1 * x2 + d2 * x1))
    return np.array([a1, a2])


def _sys_3_3_3(x, v, p):
    x1, x2 = x
    d1, d2 = v
    r2, r3, w = p["r2"], p["r3"], p["omega"]
    a1 = -(2 * x1 * (x1 - x2))**-1 * (
        2 * d1 * (d1 * (x1 - 2 * x2) - 2 * d2 * x1)
        + (r2)**2 * w**2 * (x1)**2 * (x1 + 2 * x2)
        + 2 * I * r3 * w * x1 * (2 * d1 * x2 + d2 * x1))
    a2 = ((x1)**2 * (x1 - x2))**-1 * (
        -2 * d1 * (d1 * (x2)**2 + 2 * d2 * (x1)**2)
        + (r2)**2 * w**2 * (x1)**2 * x2 * (x1 + 2 * x2)
        + I * r3 * w * x1 * (x1 + x2) * (2 * d1 * x2 + d2 * x1))
    return np.array([a1, a2])


# ---- harmonic plus damped ----------------------------------------------

def _sys_3_4_1(x, v, p, sign=+1):
    x1, x2 = x
    d1, d2 = v
    r, a, w = p["r"], p["a"], p["omega"]
    a1 = (x1 - x2)**-1 * (
        d1 * (d1 + 2 * d2) - r**2 * w**2 * x1 * (2 * x1 + x2)
        + a * (d1 * (x1 + x2) + d2 * x1))
    a2 = (x1 - x2)**-1 * (
        sign * 2 * d1 * (d1 + 2 * d2) + r**2 * w**2 * (x1 + x2) * (2 * x1 + x2)
        - 2 * a * (d1 * (x1 + x2) + d2 * x1))
    return np.array([a1, a2])


def _sys_3_4_2(x, v, p, rpow=1):
    x1, x2 = x
    d1, d2 = v
    r, a, w = p["r"], p["a"], p["omega"]
    a1 = (2 * x1 * (x1 - x2))**-1 * (
        2 * d1 * (d1 * x2 + 2 * d2 * x1) - r**2 * w**2 * (x1)**2 * (2 * x1 + x2)
        + a * x1 * (2 * d1 * x2 + d2 * x1))
    a2 = (x1 * (x1 - x2))**-1 * (
        -2 * d1 * (d1 * x2 + 2 * d2 * x1) + r**rpow * w**2 * x1 * x2 * (2 * x1 + x2)
        - a * x1 * (2 * d1 * x2 + d2 * x1))
    return np.array([a1, a2])


def _sys_3_4_3(x, v, p):
    x1, x2 = x
    d1, d2 = v
    r, a, w = p["r"], p["a"], p["omega"]
    a1 = (2 * x1 * (x1 - x2))**-1 * (
        -2 * d1 * (d1 * (x1 - 2 * x2) - 2 * d2 * x1)
        - r**2 * w**2 * (x1)**2 * (x1 + 2 * x2)
        + 2 * a * x1 * (2 * d1 * x2 + d2 * x1))
    a2 = ((x1)**2 * (x1 - x2))**-1 * (
        -2 * d1 * (d1 * (x2)**2 + 2 * d2 * (x1)**2)
        + r**2 * w**2 * (x1)**2 * x2 * (x1 + 2 * x2)
        - a * x1 * (x1 + x2) * (2 * d1 * x2 + d2 * x1))
    return np.array([a1, a2])


# ---- three bodies, all harmonic -----------------------------------------

def _sys_3_5(mbar):
    def rhs(x, v, p):
        x1, x2, x3 = x
        d1, d2, d3 = v
        w = p["omega"]
        rr = {m: p[f"r{m}"] for m in (1, 2, 3, 4) if m != mbar}
        y = {
            1: -(2 * x1 + x2 + x3),
            2: (x1)**2 + 2 * x1 * x2 + 2 * x1 * x3 + x2 * x3,
            3: -((x1)**2 * x2 + (x1)**2 * x3 + 2 * x1 * x2 * x3),
            4: (x1)**2 * x2 * x3,
        }
        k = 4 - mbar
        s1 = sum((m - mbar) * rr[m]**2 * w**2 * x1**(3 - m) * y[m] for m in rr)
        a1 = (-k * (d1)**2 / x1 + d1 * (2 * d2 + d1) / (x1 - x2)
              + d1 * (2 * d3 + d1) / (x1 - x3)
              - 1 / (2 * (x1 - x2) * (x1 - x3)) * s1)
        s2 = sum(rr[m]**2 * w**2 * y[m] * ((x2)**(mbar - m) - (x1)**(mbar - m)) / (x2 - x1)
                 for m in rr)
        a2 = (2 * d2 * d3 / (x2 - x3)
              + 2 * d1 / (x2 - x1) * (2 * d2 + (x2 / x1)**k * ((x1 - x3) / (x2 - x3)) * d1)
              + (x2)**k / ((x2 - x1) * (x2 - x3)) * s2)
        s3 = sum(rr[m]**2 * w**2 * y[m] * ((x3)**(mbar - m) - (x1)**(mbar - m)) / (x3 - x1)
                 for m in rr)
        a3 = (-2 * d2 * d3 / (x2 - x3)
              + 2 * d1 / (x3 - x1) * (2 * d3 + (x3 / x1)**k * ((x1 - x2) / (x3 - x2)) * d1)
              + (x3)**k / ((x3 - x1) * (x3 - x2)) * s3)
        return np.array([a1, a2, a3])
    return rhs


@dataclass(frozen=True)
class PrintedSystem:
    """One typeset system and the coefficient model that generates it."""

    system_id: str
    N: int
    mbar: int
    law_kinds: dict  # m -> (LawKind, parameter key)
    printed: Callable
    corrected: Optional[Callable] = None
    erratum: Optional[str] = None
    simplified: bool = False

    @property
    def rhs(self) -> Callable:
        """The reading that should match the generic formula."""
        return self.corrected or self.printed

    def model(self, params) -> ModelSpec:
        laws = {}
        for m, (kind, key) in self.law_kinds.items():
            if kind is LawKind.DAMPED:
                laws[m] = CoefficientLaw(kind, a=params[key], omega=params["omega"])
            else:
                laws[m] = CoefficientLaw(kind, r=parse_rational(params[key]), omega=params["omega"])
        return ModelSpec(self.N, self.mbar, laws)


_LV, _HO, _DA = LawKind.LINEAR_VELOCITY, LawKind.HARMONIC, LawKind.DAMPED


def _flip(func, **kw):
    def wrapped(x, v, p):
        return func(x, v, p, **kw)
    return wrapped


def _catalog():
    entries = [
        PrintedSystem("example-3.1.1", 2, 3, {1: (_LV, "r1"), 2: (_LV, "r2")},
                      _sys_3_1_1),
        PrintedSystem("example-3.1.2", 2, 2, {1: (_LV, "r1"), 3: (_LV, "r3")},
                      _sys_3_1_2),
        PrintedSystem("example-3.1.3", 2, 1, {2: (_LV, "r2"), 3: (_LV, "r3")},
                      _sys_3_1_3),
        PrintedSystem("example-3.2.1", 2, 3, {1: (_HO, "r1"), 2: (_HO, "r2")},
                      _sys_3_2_1,
                      corrected=_flip(_sys_3_2_1, sign=-1),
                      erratum="second equation: velocity term +2 x1'(...) should carry a minus sign"),
        PrintedSystem("example-3.2.2", 2, 2, {1: (_HO, "r1"), 3: (_HO, "r3")},
                      _sys_3_2_2,
                      corrected=_flip(_sys_3_2_2, sign=-1),
                      erratum="second equation: numerator has the wrong overall sign"),
        PrintedSystem("example-3.2.3", 2, 1, {2: (_HO, "r2"), 3: (_HO, "r3")},
                      _sys_3_2_3),
        PrintedSystem("example-3.3.1", 2, 3, {1: (_HO, "r1"), 2: (_LV, "r2")},
                      _sys_3_3_1),
        PrintedSystem("example-3.3.2", 2, 2, {1: (_HO, "r1"), 3: (_LV, "r3")},
                      _sys_3_3_2),
        PrintedSystem("example-3.3.3", 2, 1, {2: (_HO, "r2"), 3: (_LV, "r3")},
                      _sys_3_3_3),
        PrintedSystem("example-3.4.1", 2, 3,
                      {1: (_HO, "r"), 2: (_DA, "a")}, _sys_3_4_1,
                      corrected=_flip(_sys_3_4_1, sign=-1),
                      erratum="second equation: velocity term +2 x1'(...) should carry a minus sign"),
        PrintedSystem("example-3.4.2", 2, 2,
                      {1: (_HO, "r"), 3: (_DA, "a")}, _sys_3_4_2,
                      corrected=_flip(_sys_3_4_2, rpow=2),
                      erratum="second equation: r w^2 should read r^2 w^2"),
        PrintedSystem("example-3.4.3", 2, 1,
                      {2: (_HO, "r"), 3: (_DA, "a")}, _sys_3_4_3),
        PrintedSystem("equal-rate-linear-velocity-mbar3", 2, 3,
                      {1: (_LV, "r"), 2: (_LV, "r")}, _equal_lv_a, simplified=True),
        PrintedSystem("equal-rate-linear-velocity-mbar2", 2, 2,
                      {1: (_LV, "r"), 3: (_LV, "r")}, _equal_lv_b, simplified=True),
        PrintedSystem("equal-rate-linear-velocity-mbar1", 2, 1,
                      {2: (_LV, "r"), 3: (_LV, "r")}, _equal_lv_c, simplified=True),
        PrintedSystem("equal-rate-harmonic-mbar3", 2, 3,
                      {1: (_HO, "r"), 2: (_HO, "r")}, _equal_ho_a,
                      corrected=_flip(_equal_ho_a, sign=-1),
                      erratum="second equation: velocity term +2 x1'(...) should carry a minus sign", simplified=True),
        PrintedSystem("equal-rate-harmonic-mbar2", 2, 2,
                      {1: (_HO, "r"), 3: (_HO, "r")}, _equal_ho_b,
                      corrected=_flip(_equal_ho_b, corrected=True),
                      erratum="second equation: forcing factor (x2 - x1) should read (x1 + x2) "
                              "and the velocity term should carry a minus sign", simplified=True),
        PrintedSystem("equal-rate-harmonic-mbar1", 2, 1,
                      {2: (_HO, "r"), 3: (_HO, "r")}, _equal_ho_c, simplified=True),
    ]
    for mbar in (1, 2, 3, 4):
        entries.append(PrintedSystem(
            f"example-3.5-mbar{mbar}", 3, mbar,
            {m: (_HO, f"r{m}") for m in (1, 2, 3, 4) if m != mbar}, _sys_3_5(mbar)))
    return {e.system_id: e for e in entries}


CATALOG = _catalog()

ALIASES = {f"example-3.5.{5 - m}": f"example-3.5-mbar{m}" for m in (1, 2, 3, 4)}


def get_system(system_id: str) -> PrintedSystem:
    system_id = ALIASES.get(system_id, system_id)
    try:
        return CATALOG[system_id]
    except KeyError:
        raise KeyError(f"unknown printed system {system_id!r}; "
                       f"known: {', '.join(CATALOG)}") from None


def integrate_printed(system_id: str, params, initial, t_grid, settings=None,
                      verbatim: bool = False):
    """Integrate a catalog system with the Python DOPRI driver.

    ``verbatim=True`` uses the expanded form exactly as written, errata and
    all; the default uses the reading that matches the generic formula.
    """
    from .integrator import IntegratorSettings, integrate_rhs
    from .errors import SingularConfigurationError

    system = get_system(system_id)
    func = system.printed if verbatim else system.rhs
    settings = settings or IntegratorSettings()

    def rhs(x, v):
        with np.errstate(divide="raise", invalid="raise"):
            try:
                acc = func(x, v, params)
            except (ZeroDivisionError, FloatingPointError):
                raise SingularConfigurationError("singular configuration") from None
        if not np.all(np.isfinite(acc)):
            raise SingularConfigurationError("non-finite acceleration")
        return acc

    return integrate_rhs(rhs, initial, t_grid, settings, source="printed")


def preset_params(spec: ModelSpec) -> dict:
    """Parameter mapping for a catalog RHS from a coefficient model."""
    params = {"omega": spec.omega}
    for m, law in spec.laws.items():
        if law.kind is LawKind.DAMPED:
            params["a"] = law.a
        else:
            params[f"r{m}"] = float(law.r)
            params["r"] = float(law.r)
    return params
