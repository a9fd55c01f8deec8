"""Hot numeric kernels.

Every function here is written in the numba-compatible subset and decorated
with :func:`doubleroot._accel.njit`, so it runs compiled when numba is enabled
and as ordinary Python otherwise. Arrays are complex128 unless noted.

Status codes returned by kernels (never exceptions, numba cannot carry
payloads): ``OK``, ``SINGULAR``, ``MAX_STEPS``, ``NO_CONVERGENCE``.
"""

import math

import numpy as np

from ._accel import njit

OK = 0
SINGULAR = 1
MAX_STEPS = 2
NO_CONVERGENCE = 3

FROZEN = 0
LINEAR_VELOCITY = 1
HARMONIC = 2
DAMPED = 3

EPS = 2.220446049250313e-16


@njit
def cpow(z, k):
    """Integer power by repeated squaring; ``k`` may be negative."""
    if k < 0:
        z = 1.0 / z
        k = -k
    result = 1.0 + 0.0j
    base = z
    while k > 0:
        if k & 1:
            result *= base
        base *= base
        k >>= 1
    return result


@njit
def divided_power(k, a, b):
    """(a**k - b**k) / (a - b) evaluated as a finite sum."""
    total = 0.0 + 0.0j
    if k > 0:
        for j in range(k):
            total += cpow(a, k - 1 - j) * cpow(b, j)
    elif k < 0:
        for j in range(-k):
            total -= cpow(a, -(j + 1)) * cpow(b, k + j)
    return total


@njit
def expand_double_root(x, out):
    """Coefficients of (z - x[0])**2 * prod_{n>=1} (z - x[n]), leading first.

    ``out`` has length ``len(x) + 2``; ``out[0] == 1`` and ``out[m] == y_m``.
    """
    n = x.shape[0]
    out[:] = 0.0
    out[0] = 1.0
    deg = 0
    for k in range(n + 1):
        root = x[0] if k == 0 else x[k - 1]
        deg += 1
        for j in range(deg, 0, -1):
            out[j] -= root * out[j - 1]
    return out


@njit
def expand_double_root_velocity(x, v, out):
    """Time derivative of :func:`expand_double_root` along velocities ``v``.

    Product rule over the linear factors: each factor (z - r) contributes
    -rdot times the product of the others.
    """
    n = x.shape[0]
    out[:] = 0.0
    factors = np.empty(n + 1, dtype=np.complex128)
    rates = np.empty(n + 1, dtype=np.complex128)
    factors[0] = x[0]
    rates[0] = v[0]
    for k in range(n):
        factors[k + 1] = x[k]
        rates[k + 1] = v[k]
    partial = np.empty(n + 1, dtype=np.complex128)
    for skip in range(n + 1):
        if rates[skip] == 0:
            continue
        partial[:] = 0.0
        partial[0] = 1.0
        deg = 0
        for k in range(n + 1):
            if k == skip:
                continue
            deg += 1
            for j in range(deg, 0, -1):
                partial[j] -= factors[k] * partial[j - 1]
        # -rate * z**0..n-1 partial, shifted to align with degree n+1
        for j in range(n + 1):
            out[j + 1] -= rates[skip] * partial[j]
    return out


@njit
def law_acceleration(kind, rate, omega, y, ydot):
    if kind == LINEAR_VELOCITY:
        return 1j * rate * omega * ydot
    if kind == HARMONIC:
        return -(rate * omega) ** 2 * y
    if kind == DAMPED:
        return -rate * ydot
    return 0.0 + 0.0j


@njit
def min_separation(x):
    """Smallest of |x1| and all pairwise distances (with x1 = x[0])."""
    n = x.shape[0]
    best = abs(x[0])
    for i in range(n):
        for j in range(i + 1, n):
            d = abs(x[i] - x[j])
            if d < best:
                best = d
    return best


@njit
def zero_accelerations(x, v, mbar, kinds, rates, omega, guard, out):
    """Accelerations of the N zeros for the solvable coefficient model.

    ``kinds``/``rates`` are indexed by coefficient number m (entry 0 unused).
    Returns ``SINGULAR`` without touching ``out`` if the configuration is
    closer than ``guard`` to a collision or to x1 = 0.
    """
    n = x.shape[0]
    if min_separation(x) < guard:
        return SINGULAR
    y = np.empty(n + 2, dtype=np.complex128)
    ydot = np.empty(n + 2, dtype=np.complex128)
    expand_double_root(x, y)
    expand_double_root_velocity(x, v, ydot)
    yddot = np.zeros(n + 2, dtype=np.complex128)
    for m in range(1, n + 2):
        if m != mbar:
            yddot[m] = law_acceleration(kinds[m], rates[m], omega, y[m], ydot[m])

    x1 = x[0]
    v1 = v[0]
    shift = n + 1 - mbar

    # double zero
    prod1 = 1.0 + 0.0j
    pair_sum = 0.0 + 0.0j
    for k in range(1, n):
        prod1 *= x1 - x[k]
        pair_sum += (2.0 * v[k] + v1) / (x1 - x[k])
    forcing = 0.0 + 0.0j
    for m in range(1, n + 2):
        if m != mbar:
            forcing += (m - mbar) * yddot[m] * cpow(x1, n - m)
    out[0] = -shift * v1 * v1 / x1 + v1 * pair_sum + forcing / (2.0 * prod1)

    # simple zeros
    for i in range(1, n):
        xi = x[i]
        vi = v[i]
        acc = 2.0 * v1 * vi / (xi - x1)
        for k in range(n):
            if k != i:
                acc += 2.0 * vi * v[k] / (xi - x[k])
        ratio = 1.0 + 0.0j
        for k in range(1, n):
            if k != i:
                ratio *= (x1 - x[k]) / (xi - x[k])
        acc += 2.0 * v1 * v1 / (xi - x1) * cpow(xi / x1, shift) * ratio
        denom = 1.0 + 0.0j
        for k in range(n):
            if k != i:
                denom *= xi - x[k]
        forcing = 0.0 + 0.0j
        for m in range(1, n + 2):
            if m != mbar:
                forcing += yddot[m] * divided_power(mbar - m, xi, x1)
        acc -= cpow(xi, shift) / denom * forcing
        out[i] = acc
    return OK


@njit
def _phase_rhs(state, n, mbar, kinds, rates, omega, guard, out):
    out[:n] = state[n:]
    return zero_accelerations(state[:n], state[n:], mbar, kinds, rates, omega, guard, out[n:])


# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0,
)
# continuous extension (Hairer, Norsett & Wanner, dopri5)
_D1, _D3, _D4, _D5, _D6, _D7 = (
    -12715105075.0 / 11282082432.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
)


@njit
def _error_norm(err, y, ynew, rtol, atol):
    worst = 0.0
    for i in range(err.shape[0]):
        sre = atol + rtol * max(abs(y[i].real), abs(ynew[i].real))
        sim = atol + rtol * max(abs(y[i].imag), abs(ynew[i].imag))
        e = max(abs(err[i].real) / sre, abs(err[i].imag) / sim)
        if e > worst:
            worst = e
    return worst


@njit
def dopri_integrate(y0, t_grid, n, mbar, kinds, rates, omega, guard,
                    rtol, atol, h0, hmax, hmin, max_steps, out):
    """Adaptive DOPRI5 over the 2N complex phase-space vector.

    Fills ``out[k]`` with the state at ``t_grid[k]`` through the dense
    continuous extension. ``t_grid`` must be monotone (either direction).

    Returns ``(status, accepted, rejected, t_reached)``.
    """
    dim = 2 * n
    npts = t_grid.shape[0]
    t = t_grid[0]
    tend = t_grid[npts - 1]
    direction = 1.0 if tend >= t else -1.0
    y = y0.copy()
    out[0, :] = y
    if npts == 1:
        return OK, 0, 0, t

    k1 = np.empty(dim, dtype=np.complex128)
    k2 = np.empty(dim, dtype=np.complex128)
    k3 = np.empty(dim, dtype=np.complex128)
    k4 = np.empty(dim, dtype=np.complex128)
    k5 = np.empty(dim, dtype=np.complex128)
    k6 = np.empty(dim, dtype=np.complex128)
    k7 = np.empty(dim, dtype=np.complex128)
    stage = np.empty(dim, dtype=np.complex128)
    ynew = np.empty(dim, dtype=np.complex128)
    err = np.empty(dim, dtype=np.complex128)

    if _phase_rhs(y, n, mbar, kinds, rates, omega, guard, k1) != OK:
        return SINGULAR, 0, 0, t

    h = h0
    if h <= 0.0:
        h = min(hmax, 1e-3 * abs(tend - t))
    accepted = 0
    rejected = 0
    idx = 1
    last_failed = False
    while idx < npts:
        if accepted + rejected >= max_steps:
            return MAX_STEPS, accepted, rejected, t
        h = min(h, hmax, abs(tend - t))
        hs = direction * h

        stage[:] = y + hs * (_A21 * k1)
        status = _phase_rhs(stage, n, mbar, kinds, rates, omega, guard, k2)
        if status == OK:
            stage[:] = y + hs * (_A31 * k1 + _A32 * k2)
            status = _phase_rhs(stage, n, mbar, kinds, rates, omega, guard, k3)
        if status == OK:
            stage[:] = y + hs * (_A41 * k1 + _A42 * k2 + _A43 * k3)
            status = _phase_rhs(stage, n, mbar, kinds, rates, omega, guard, k4)
        if status == OK:
            stage[:] = y + hs * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4)
            status = _phase_rhs(stage, n, mbar, kinds, rates, omega, guard, k5)
        if status == OK:
            stage[:] = y + hs * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5)
            status = _phase_rhs(stage, n, mbar, kinds, rates, omega, guard, k6)
        if status == OK:
            ynew[:] = y + hs * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
            status = _phase_rhs(ynew, n, mbar, kinds, rates, omega, guard, k7)
        if status != OK:
            rejected += 1
            h *= 0.5
            if h < hmin:
                return SINGULAR, accepted, rejected, t
            last_failed = True
            continue

        err[:] = hs * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)
        enorm = _error_norm(err, y, ynew, rtol, atol)
        if enorm <= 1.0:
            tnew = t + hs
            while idx < npts and direction * (t_grid[idx] - tnew) <= 0.0:
                if t_grid[idx] == tnew:
                    out[idx, :] = ynew
                else:
                    theta = (t_grid[idx] - t) / hs
                    theta1 = 1.0 - theta
                    for i in range(dim):
                        ydiff = ynew[i] - y[i]
                        bspl = hs * k1[i] - ydiff
                        r4 = ydiff - hs * k7[i] - bspl
                        r5 = hs * (_D1 * k1[i] + _D3 * k3[i] + _D4 * k4[i]
                                   + _D5 * k5[i] + _D6 * k6[i] + _D7 * k7[i])
                        out[idx, i] = y[i] + theta * (
                            ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)))
                idx += 1
            t = tnew
            y[:] = ynew
            k1[:] = k7
            accepted += 1
            factor = 5.0 if enorm == 0.0 else min(5.0, max(0.2, 0.9 * enorm ** -0.2))
            if last_failed:
                factor = min(factor, 1.0)
            h *= factor
            last_failed = False
        else:
            rejected += 1
            h *= max(0.2, 0.9 * enorm ** -0.2)
            last_failed = True
            if h < hmin:
                return SINGULAR, accepted, rejected, t
    return OK, accepted, rejected, t


@njit
def horner(coeffs, z):
    """Value and derivative of sum coeffs[i] z**(deg-i)."""
    p = coeffs[0]
    dp = 0.0 + 0.0j
    for i in range(1, coeffs.shape[0]):
        dp = dp * z + p
        p = p * z + coeffs[i]
    return p, dp


@njit
def aberth(coeffs, roots, max_iter):
    """Simultaneous Aberth-Ehrlich iteration for all roots.

    ``coeffs`` lists the polynomial leading-first (leading entry nonzero);
    ``roots`` receives the ``len(coeffs) - 1`` roots. Stops per root once the
    backward error is at the rounding level. Returns
    ``(status, iterations, worst_relative_residual)``.
    """
    deg = coeffs.shape[0] - 1
    a = coeffs / coeffs[0]
    radius = 0.0
    for k in range(1, deg + 1):
        r = abs(a[k]) ** (1.0 / k)
        if r > radius:
            radius = r
    if radius == 0.0:
        roots[:] = 0.0
        return OK, 0, 0.0
    center = -a[1] / deg
    for k in range(deg):
        ang = 2.0 * math.pi * k / deg + 0.4
        roots[k] = center + radius * (math.cos(ang) + 1j * math.sin(ang))

    absa = np.abs(a)
    done = np.zeros(deg, dtype=np.bool_)
    tol = 8.0 * deg * EPS
    it = 0
    for it in range(1, max_iter + 1):
        moved = False
        for k in range(deg):
            if done[k]:
                continue
            z = roots[k]
            p, dp = horner(a, z)
            az = abs(z)
            scale = 0.0
            for i in range(deg + 1):
                scale = scale * az + absa[i]
            if abs(p) <= tol * scale:
                done[k] = True
                continue
            s = 0.0 + 0.0j
            for j in range(deg):
                if j != k:
                    diff = z - roots[j]
                    if diff != 0:
                        s += 1.0 / diff
            if dp == 0:
                corr = p
            else:
                ratio = p / dp
                denom = 1.0 - ratio * s
                corr = ratio if denom == 0 else ratio / denom
            roots[k] = z - corr
            moved = True
        if not moved:
            break

    worst = 0.0
    for k in range(deg):
        z = roots[k]
        p, dp = horner(a, z)
        az = abs(z)
        scale = 0.0
        for i in range(deg + 1):
            scale = scale * az + absa[i]
        rel = abs(p) / scale if scale > 0.0 else abs(p)
        if rel > worst:
            worst = rel
    status = OK
    for k in range(deg):
        if not done[k]:
            status = NO_CONVERGENCE
    return status, it, worst
