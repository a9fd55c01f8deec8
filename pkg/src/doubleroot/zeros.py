"""Equations of motion of the zeros of a polynomial with one double zero.

Coefficient arrays (``ydots``, ``yddots``) are indexed by position m-1 for
y_m, m = 1..N+1; the entry at ``spec.mbar`` is never read.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import SingularConfigurationError
from .laws import ModelSpec
from .polynomial import ZeroState, closest_pair

#: RHS evaluations refuse configurations closer than this to a collision.
RHS_GUARD = 1e-8


def divided_power(k: int, a: complex, b: complex) -> complex:
    """(a**k - b**k)/(a - b) as a finite sum, safe for a close to b.

    For k < 0 both bases must be nonzero.
    """
    if k < 0 and (a == 0 or b == 0):
        raise ZeroDivisionError("zero base with a negative exponent")
    return complex(kernels.divided_power(int(k), complex(a), complex(b)))


def _check(state: ZeroState, guard: float = RHS_GUARD):
    x = state.positions
    if abs(x[0]) < guard:
        raise SingularConfigurationError("x1 vanishes", pair=(0, 0), separation=abs(x[0]))
    i, j, d = closest_pair(list(x))
    if d < guard:
        raise SingularConfigurationError(
            f"zeros {i + 1} and {j + 1} collide (|dx| = {d:.3e})", pair=(i, j), separation=d)
    return x


def _forcing_sum(ys, x_n, x1, spec):
    return sum(ys[m - 1] * divided_power(spec.mbar - m, x_n, x1)
               for m in range(1, spec.N + 2) if m != spec.mbar)


def _double_forcing(ys, x1, spec):
    N = spec.N
    return sum((m - spec.mbar) * ys[m - 1] * x1 ** (N - m)
               for m in range(1, N + 2) if m != spec.mbar)


def xdot_simple(n: int, state: ZeroState, ydots, spec: ModelSpec) -> complex:
    """Velocity of the simple zero ``n`` (2..N) from the coefficient velocities."""
    x = _check(state)
    i = n - 1
    xn = x[i]
    prod = np.prod([xn - x[k] for k in range(spec.N) if k != i])
    return complex(-xn ** (spec.N + 1 - spec.mbar) / prod * _forcing_sum(ydots, xn, x[0], spec))


def xdot_double(state: ZeroState, ydots, spec: ModelSpec) -> complex:
    """Velocity of the double zero x1 from the coefficient velocities."""
    x = _check(state)
    prod = np.prod([x[0] - x[k] for k in range(1, spec.N)])
    return complex(_double_forcing(ydots, x[0], spec) / (2.0 * prod))


def xddot_double(state: ZeroState, yddots, spec: ModelSpec) -> complex:
    x = _check(state)
    v = state.velocities
    x1, v1 = x[0], v[0]
    pairs = sum((2.0 * v[k] + v1) / (x1 - x[k]) for k in range(1, spec.N))
    prod = np.prod([x1 - x[k] for k in range(1, spec.N)])
    return complex(-(spec.N + 1 - spec.mbar) * v1 ** 2 / x1 + v1 * pairs
                   + _double_forcing(yddots, x1, spec) / (2.0 * prod))


def xddot_simple(n: int, state: ZeroState, yddots, spec: ModelSpec) -> complex:
    x = _check(state)
    v = state.velocities
    N, i = spec.N, n - 1
    x1, v1, xn, vn = x[0], v[0], x[i], v[i]
    acc = 2.0 * v1 * vn / (xn - x1)
    acc += sum(2.0 * vn * v[k] / (xn - x[k]) for k in range(N) if k != i)
    ratio = np.prod([(x1 - x[k]) / (xn - x[k]) for k in range(1, N) if k != i])
    acc += 2.0 * v1 ** 2 / (xn - x1) * (xn / x1) ** (N + 1 - spec.mbar) * ratio
    denom = xn ** (spec.mbar - N - 1) * np.prod([xn - x[k] for k in range(N) if k != i])
    acc -= _forcing_sum(yddots, xn, x1, spec) / denom
    return complex(acc)


def zero_velocities(state: ZeroState, ydots, spec: ModelSpec) -> np.ndarray:
    """All N velocities from the first-derivative transfer formulas."""
    out = [xdot_double(state, ydots, spec)]
    out += [xdot_simple(n, state, ydots, spec) for n in range(2, spec.N + 1)]
    return np.array(out)


class RHS:
    """Compiled right-hand side for one model, reusable across states."""

    def __init__(self, spec: ModelSpec, guard: float = RHS_GUARD):
        self.spec = spec
        self.guard = guard
        self.kinds, self.rates = spec.kernel_arrays()

    def accelerations(self, x, v) -> np.ndarray:
        x = np.ascontiguousarray(x, dtype=np.complex128)
        v = np.ascontiguousarray(v, dtype=np.complex128)
        out = np.empty_like(x)
        status = kernels.zero_accelerations(
            x, v, self.spec.mbar, self.kinds, self.rates, self.spec.omega, self.guard, out)
        if status != kernels.OK:
            i, j, d = closest_pair(list(x))
            if abs(x[0]) < d:
                i, j, d = 0, 0, abs(x[0])
            raise SingularConfigurationError(
                f"singular configuration (separation {d:.3e})", pair=(i, j), separation=d)
        return out

    def __call__(self, state: ZeroState) -> np.ndarray:
        return self.accelerations(state.positions, state.velocities)


def system_rhs(spec: ModelSpec, state: ZeroState) -> np.ndarray:
    """Accelerations (x1'', x2'', ..., xN'') of the closed zero system."""
    if state.N != spec.N:
        raise ValueError(f"state has N={state.N}, model has N={spec.N}")
    return RHS(spec)(state)
