"""Direct numerical integration of the zero equations of motion.

This is the independent check on the algebraic pipeline: it never touches the
coefficient flows, only the explicit Newtonian system for the zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .errors import IntegrationError, SingularConfigurationError
from .laws import ModelSpec
from .polynomial import ZeroState, closest_pair
from .trajectory import TrackedTrajectory
from .zeros import RHS_GUARD


@dataclass(frozen=True)
class IntegratorSettings:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    initial_step: float = 0.0  # 0 picks one from the span
    max_steps: int = 2_000_000
    min_step: float = 1e-14

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")

    def with_rel_tol(self, rel_tol: float) -> "IntegratorSettings":
        return replace(self, rel_tol=rel_tol)


def _check_grid(t_grid) -> np.ndarray:
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("t_grid must be a non-empty 1-d sequence")
    d = np.diff(t)
    if t.size > 1 and not (np.all(d > 0) or np.all(d < 0)):
        raise ValueError("t_grid must be strictly monotone")
    return t


def _collision_error(phase: np.ndarray, n: int, t: float) -> SingularConfigurationError:
    x = phase[:n]
    i, j, d = closest_pair(list(x))
    if abs(x[0]) < d:
        i, j, d = 0, 0, abs(x[0])
    return SingularConfigurationError(
        f"step size underflow near t={t:.6g}: zeros {i + 1} and {j + 1} at "
        f"separation {d:.3e}", pair=(i, j), separation=d, time=t)


def _run(n, mbar, kinds, rates, omega, y0, t, settings, source, guard):
    out = np.empty((t.size, 2 * n), dtype=np.complex128)
    status, accepted, rejected, t_reached = kernels.dopri_integrate(
        y0, t, n, mbar, kinds, rates, omega, guard,
        settings.rel_tol, settings.abs_tol, settings.initial_step,
        settings.max_step, settings.min_step, settings.max_steps, out)
    if status == kernels.MAX_STEPS:
        raise IntegrationError(
            f"max_steps={settings.max_steps} exceeded at t={t_reached:.6g}", time=t_reached)
    if status == kernels.SINGULAR:
        direction = 1.0 if t[-1] >= t[0] else -1.0
        filled = int(np.sum(direction * (t - t_reached) <= 0.0))
        raise _collision_error(out[max(filled, 1) - 1], n, t_reached)
    return TrackedTrajectory(
        times=t, x=out[:, :n], v=out[:, n:], source=source,
        diagnostics={"accepted_steps": int(accepted), "rejected_steps": int(rejected),
                     "rel_tol": settings.rel_tol, "abs_tol": settings.abs_tol})


def integrate(spec: ModelSpec, initial: ZeroState, t_grid,
              settings: IntegratorSettings = IntegratorSettings(),
              guard: float = RHS_GUARD) -> TrackedTrajectory:
    """Integrate the generic zero system from ``initial`` over ``t_grid``.

    Raises
    ------
    IntegrationError
        When ``settings.max_steps`` is exhausted.
    SingularConfigurationError
        When steps shrink below ``settings.min_step`` because every attempt
        lands on a (near) collision; the offending pair is attached.
    """
    if initial.N != spec.N:
        raise ValueError(f"initial state has N={initial.N}, model has N={spec.N}")
    t = _check_grid(t_grid)
    kinds, rates = spec.kernel_arrays()
    return _run(spec.N, spec.mbar, kinds, rates, spec.omega, initial.as_vector(), t,
                settings, "direct", guard)


def integrate_rhs(rhs, initial: ZeroState, t_grid,
                  settings: IntegratorSettings = IntegratorSettings(),
                  source: str = "direct") -> TrackedTrajectory:
    """Same scheme driven by an arbitrary Python ``rhs(x, v) -> acc``.

    Slower than :func:`integrate`; it exists for the transcribed printed
    systems, which are plain Python.
    """
    t = _check_grid(t_grid)
    n = initial.N

    def f(y):
        return np.concatenate([y[n:], rhs(y[:n], y[n:])])

    return _dopri_python(f, initial.as_vector(), t, n, settings, source)


_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
_D = np.array([-12715105075 / 11282082432, 0.0, 87487479700 / 32700410799,
               -10690763975 / 1880347072, 701980252875 / 199316789632,
               -1453857185 / 822651844, 69997945 / 29380423])


def _dopri_python(f, y0, t, n, settings, source):
    # Vectorised-stage twin of kernels.dopri_integrate for Python callables.
    out = np.empty((t.size, 2 * n), dtype=np.complex128)
    out[0] = y0
    direction = 1.0 if t[-1] >= t[0] else -1.0
    y = y0.copy()
    tc = t[0]
    h = settings.initial_step or min(settings.max_step, 1e-3 * abs(t[-1] - t[0]))
    k = np.empty((7, y.size), dtype=np.complex128)
    try:
        k[0] = f(y)
    except SingularConfigurationError:
        raise _collision_error(y, n, tc) from None
    idx, accepted, rejected, failed = 1, 0, 0, False
    while idx < t.size:
        if accepted + rejected >= settings.max_steps:
            raise IntegrationError(f"max_steps exceeded at t={tc:.6g}", time=tc)
        h = min(h, settings.max_step, abs(t[-1] - tc))
        hs = direction * h
        try:
            for s in range(1, 7):
                k[s] = f(y + hs * np.dot(_A[s], k[:s]))
        except SingularConfigurationError:
            rejected += 1
            h *= 0.5
            failed = True
            if h < settings.min_step:
                raise _collision_error(y, n, tc) from None
            continue
        ynew = y + hs * np.dot(_A[6], k[:6])
        err = hs * (_E @ k)
        scale_re = settings.abs_tol + settings.rel_tol * np.maximum(abs(y.real), abs(ynew.real))
        scale_im = settings.abs_tol + settings.rel_tol * np.maximum(abs(y.imag), abs(ynew.imag))
        enorm = max(np.max(abs(err.real) / scale_re), np.max(abs(err.imag) / scale_im))
        if enorm <= 1.0:
            tnew = tc + hs
            while idx < t.size and direction * (t[idx] - tnew) <= 0.0:
                theta = (t[idx] - tc) / hs
                ydiff = ynew - y
                bspl = hs * k[0] - ydiff
                r4 = ydiff - hs * k[6] - bspl
                r5 = hs * (_D @ k)
                out[idx] = y + theta * (ydiff + (1 - theta) * (
                    bspl + theta * (r4 + (1 - theta) * r5)))
                idx += 1
            tc, y = tnew, ynew
            k[0] = k[6]
            accepted += 1
            factor = 5.0 if enorm == 0 else min(5.0, max(0.2, 0.9 * enorm ** -0.2))
            h *= min(factor, 1.0) if failed else factor
            failed = False
        else:
            rejected += 1
            h *= max(0.2, 0.9 * enorm ** -0.2)
            failed = True
            if h < settings.min_step:
                raise _collision_error(y, n, tc)
    return TrackedTrajectory(
        times=t, x=out[:, :n], v=out[:, n:], source=source,
        diagnostics={"accepted_steps": accepted, "rejected_steps": rejected,
                     "rel_tol": settings.rel_tol, "abs_tol": settings.abs_tol})
