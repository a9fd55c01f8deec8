"""Solvable second-order laws for the coefficients and their exact flows."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from . import kernels
from .errors import ConfigError, ContractError


class LawKind(enum.Enum):
    FROZEN = kernels.FROZEN
    LINEAR_VELOCITY = kernels.LINEAR_VELOCITY  # y'' = i r w y'
    HARMONIC = kernels.HARMONIC  # y'' = -(r w)^2 y
    DAMPED = kernels.DAMPED  # y'' = -a y'


def parse_rational(value) -> Fraction:
    """Accept ``"p/q"`` strings, ints, Fractions; floats only if exact-ish."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"not a rational number: {value!r}", field="r") from exc
    if isinstance(value, float):
        frac = Fraction(value).limit_denominator(10**4)
        if abs(float(frac) - value) > 1e-12 * max(1.0, abs(value)):
            raise ConfigError(f"{value!r} is not close to a small rational", field="r")
        return frac
    raise ConfigError(f"cannot interpret {value!r} as a rational", field="r")


@dataclass(frozen=True)
class CoefficientLaw:
    """One closed-form solvable law. ``r`` is exact; ``a`` is the damping rate."""

    kind: LawKind
    r: Optional[Fraction] = None
    a: Optional[float] = None
    omega: float = 2.0 * math.pi

    def __post_init__(self):
        if self.kind in (LawKind.LINEAR_VELOCITY, LawKind.HARMONIC):
            if self.r is None:
                raise ConfigError(f"{self.kind.name} needs a rational r", field="r")
            r = parse_rational(self.r)
            if r == 0:
                raise ConfigError("r must be nonzero", field="r")
            object.__setattr__(self, "r", r)
        elif self.kind is LawKind.DAMPED:
            if self.a is None or not float(self.a) > 0.0:
                raise ConfigError("DAMPED needs a > 0", field="a")
            object.__setattr__(self, "a", float(self.a))
        if not math.isfinite(self.omega) or self.omega == 0.0:
            raise ConfigError("omega must be finite and nonzero", field="omega")

    @classmethod
    def linear_velocity(cls, r, omega=2.0 * math.pi):
        return cls(LawKind.LINEAR_VELOCITY, r=parse_rational(r), omega=omega)

    @classmethod
    def harmonic(cls, r, omega=2.0 * math.pi):
        return cls(LawKind.HARMONIC, r=parse_rational(r), omega=omega)

    @classmethod
    def damped(cls, a, omega=2.0 * math.pi):
        return cls(LawKind.DAMPED, a=a, omega=omega)

    @property
    def rate(self) -> float:
        """Float parameter fed to the kernels (r or a)."""
        if self.kind is LawKind.DAMPED:
            return self.a
        if self.kind is LawKind.FROZEN:
            return 0.0
        return float(self.r)


FROZEN = CoefficientLaw(LawKind.FROZEN)


def flow(law: CoefficientLaw, y0: complex, ydot0: complex, t: float):
    """Exact state ``(y(t), ydot(t))`` of ``law`` from ``(y0, ydot0)``."""
    y0 = complex(y0)
    ydot0 = complex(ydot0)
    if law.kind is LawKind.LINEAR_VELOCITY:
        k = float(law.r) * law.omega
        phase = cmath.exp(1j * k * t)
        # (e^{ikt} - 1)/(ik) without cancellation for small kt
        growth = 2.0 * cmath.exp(0.5j * k * t) * math.sin(0.5 * k * t) / k
        return y0 + ydot0 * growth, ydot0 * phase
    if law.kind is LawKind.HARMONIC:
        k = float(law.r) * law.omega
        c, s = math.cos(k * t), math.sin(k * t)
        return y0 * c + ydot0 * s / k, -y0 * k * s + ydot0 * c
    if law.kind is LawKind.DAMPED:
        a = law.a
        return y0 - ydot0 * math.expm1(-a * t) / a, ydot0 * math.exp(-a * t)
    # FROZEN assigned to an evolved index: no force, free drift
    return y0 + ydot0 * t, ydot0


def second_derivative(law: CoefficientLaw, y: complex, ydot: complex) -> complex:
    if law.kind is LawKind.FROZEN:
        raise ContractError("the reconstructed coefficient carries no law")
    return complex(kernels.law_acceleration(law.kind.value, law.rate, law.omega,
                                            complex(y), complex(ydot)))


@dataclass(frozen=True)
class ModelSpec:
    """Degree data and the law assigned to every coefficient except ``mbar``."""

    N: int
    mbar: int
    laws: Mapping[int, CoefficientLaw]

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 2:
            raise ConfigError("N must be an integer >= 2", field="N")
        if not isinstance(self.mbar, int) or not 1 <= self.mbar <= self.N + 1:
            raise ConfigError(f"mbar must lie in [1, {self.N + 1}]", field="mbar")
        laws = {int(m): law for m, law in dict(self.laws).items()}
        expected = set(range(1, self.N + 2)) - {self.mbar}
        if set(laws) != expected:
            raise ConfigError(
                f"laws must cover exactly m in {sorted(expected)}, got {sorted(laws)}",
                field="laws")
        omegas = {law.omega for law in laws.values()}
        if len(omegas) > 1:
            raise ConfigError("all laws must share one omega", field="omega")
        object.__setattr__(self, "laws", dict(sorted(laws.items())))

    @property
    def omega(self) -> float:
        return next(iter(self.laws.values())).omega

    @property
    def basic_period(self) -> float:
        return 2.0 * math.pi / abs(self.omega)

    def law(self, m: int) -> CoefficientLaw:
        if m == self.mbar:
            return FROZEN
        return self.laws[m]

    def kernel_arrays(self):
        """``(kinds, rates)`` indexed by m, entry 0 and entry mbar FROZEN."""
        kinds = np.zeros(self.N + 2, dtype=np.int64)
        rates = np.zeros(self.N + 2, dtype=np.float64)
        for m, law in self.laws.items():
            kinds[m] = law.kind.value
            rates[m] = law.rate
        return kinds, rates


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def minimal_period(spec: ModelSpec) -> Optional[float]:
    """Common period of all coefficient flows, or ``None`` if any is damped.

    Each law with rate r repeats after T/|r| where T = 2 pi/|omega|; with
    r = p/q that is (q/|p|) T, and the common period is lcm(q)/gcd(|p|) T.
    FROZEN laws are ignored; they are periodic only when their initial
    velocity vanishes.
    """
    mult = period_multiple(spec)
    if mult is None:
        return None
    return float(mult) * spec.basic_period


def period_multiple(spec: ModelSpec, skip_damped: bool = False) -> Optional[Fraction]:
    """The common coefficient period as an exact multiple of T.

    With ``skip_damped`` the damped laws are left out, which gives the period
    of the regime that a damped model approaches asymptotically.
    """
    numer_lcm, denom_gcd = 1, 0
    for law in spec.laws.values():
        if law.kind is LawKind.DAMPED:
            if skip_damped:
                continue
            return None
        if law.kind is LawKind.FROZEN:
            continue
        numer_lcm = _lcm(numer_lcm, law.r.denominator)
        denom_gcd = math.gcd(denom_gcd, abs(law.r.numerator))
    if denom_gcd == 0:
        return Fraction(1)
    return Fraction(numer_lcm, denom_gcd)


def asymptotic_period(spec: ModelSpec) -> float:
    """Period of the non-damped laws alone."""
    return float(period_multiple(spec, skip_damped=True)) * spec.basic_period


class CoefficientFlow:
    """Closed-form evolution of all N+1 coefficients from t = 0.

    ``y_mbar`` is carried along unchanged; the solver overwrites it with the
    value reconstructed from the double-root constraint.
    """

    def __init__(self, spec: ModelSpec, y0, ydot0):
        self.spec = spec
        self.y0 = np.asarray(y0, dtype=np.complex128)
        self.ydot0 = np.asarray(ydot0, dtype=np.complex128)
        if self.y0.shape != (spec.N + 1,) or self.ydot0.shape != (spec.N + 1,):
            raise ValueError("initial coefficient vectors must have length N+1")

    def __call__(self, t: float):
        """Return ``(y, ydot)`` arrays of length N+1 at time ``t``."""
        y = self.y0.copy()
        ydot = self.ydot0.copy()
        for m, law in self.spec.laws.items():
            y[m - 1], ydot[m - 1] = flow(law, self.y0[m - 1], self.ydot0[m - 1], t)
        return y, ydot

    def accelerations(self, y, ydot):
        out = np.zeros(self.spec.N + 1, dtype=np.complex128)
        for m, law in self.spec.laws.items():
            if law.kind is not LawKind.FROZEN:
                out[m - 1] = second_derivative(law, y[m - 1], ydot[m - 1])
        return out
