"""Algebraic solution of the zero system through the coefficient flows.

The pipeline: map the initial zeros to coefficients, advance every
coefficient except ``y_mbar`` in closed form, follow the double zero x1 along
the roots of the derivative constraint, rebuild ``y_mbar`` from p(x1) = 0 and
finally split the rebuilt polynomial into its double and simple zeros.
Labels are carried by continuity from one sample to the next; a step whose
matching is ambiguous is bisected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import ConfigError, SingularConfigurationError, TrackingError
from .laws import CoefficientFlow, ModelSpec
from .polynomial import (CLUSTER_TOL, DEGENERACY_GUARD, MonicPolynomial, RootSet, ZeroState,
                         closest_pair, coefficient_velocities_from_zeros,
                         coefficients_from_zeros, identify_double_root, roots)
from .trajectory import TrackedTrajectory
from .zeros import zero_velocities

#: Number of times one output step may be halved before tracking gives up.
MAX_BISECTIONS = 20
#: A match is accepted only if the runner-up is at least this much farther away.
AMBIGUITY_FACTOR = 2.0
#: Relative tolerance for x1(0) against the t = 0 constraint roots.
START_TOL = 1e-8


@dataclass(frozen=True)
class SolveRequest:
    spec: ModelSpec
    initial: ZeroState
    t_grid: tuple
    start_x1: Optional[complex] = None  # branch to start from; defaults to initial.x1
    max_step: Optional[float] = None  # internal step cap; defaults to T/200

    def __post_init__(self):
        t = np.asarray(self.t_grid, dtype=float)
        if t.ndim != 1 or t.size == 0:
            raise ConfigError("t_grid must be a non-empty 1-d sequence", field="t_grid")
        if t[0] != 0.0:
            raise ConfigError("t_grid must start at 0", field="t_grid")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ConfigError("t_grid must be strictly increasing", field="t_grid")
        if self.initial.N != self.spec.N:
            raise ConfigError(
                f"initial state has N={self.initial.N}, model has N={self.spec.N}", field="N")
        object.__setattr__(self, "t_grid", tuple(float(s) for s in t))


def constraint_coefficients(ycoeffs, spec: ModelSpec) -> list:
    """Coefficients of the x1 constraint, leading first.

    The constraint is mbar w**(N+1) + sum_{m != mbar} (mbar - m) y_m w**(N+1-m).
    For mbar = N+1 there is no constant term and the factor w is dropped, so
    the result has degree N. Arithmetic stays in the element type of
    ``ycoeffs``, which keeps integer or Fraction input exact.
    """
    N, mbar = spec.N, spec.mbar
    if len(ycoeffs) != N + 1:
        raise ValueError(f"expected {N + 1} coefficients, got {len(ycoeffs)}")
    coeffs = [mbar] + [(mbar - m) * ycoeffs[m - 1] if m != mbar else 0 * ycoeffs[m - 1]
                       for m in range(1, N + 2)]
    if mbar == N + 1:
        coeffs = coeffs[:-1]
    return coeffs


def x1_constraint_roots(ycoeffs, spec: ModelSpec) -> RootSet:
    """All candidate values of x1 given the coefficients y_m, m != mbar."""
    c = np.asarray(constraint_coefficients(np.asarray(ycoeffs, dtype=np.complex128), spec),
                   dtype=np.complex128)
    return roots(MonicPolynomial(c[1:] / c[0]))


def reconstruct_ybar(x1: complex, ycoeffs, spec: ModelSpec) -> complex:
    """y_mbar from p(x1) = 0 divided by x1**(N+1-mbar)."""
    if x1 == 0:
        raise SingularConfigurationError("x1 = 0: y_mbar is undetermined",
                                         pair=(0, 0), separation=0.0)
    mbar = spec.mbar
    total = -x1 ** mbar
    for m in range(1, spec.N + 2):
        if m != mbar:
            total -= ycoeffs[m - 1] * x1 ** (mbar - m)
    return complex(total)


def _constraint_newton(w: complex, ycoeffs, spec: ModelSpec) -> complex:
    # one Newton step on the constraint to polish a root
    c = np.asarray(constraint_coefficients(ycoeffs, spec), dtype=np.complex128)
    g = np.polyval(c, w)
    dg = np.polyval(np.polyder(c), w)
    return w - g / dg if dg != 0 else w


class _Ambiguous(Exception):
    """Raised inside a step when matching cannot be decided at this step size."""


def _match_nearest(candidates, target):
    d = np.abs(np.asarray(candidates) - target)
    order = np.argsort(d)
    if len(order) > 1 and d[order[1]] < AMBIGUITY_FACTOR * d[order[0]]:
        raise _Ambiguous()
    return int(order[0]), float(d[order[0]])


def _greedy_assignment(predicted, candidates):
    """Assign each prediction a distinct candidate, closest pairs first.

    Raises :class:`_Ambiguous` if some prediction has a runner-up candidate
    within ``AMBIGUITY_FACTOR`` of its nearest one.
    """
    predicted = np.asarray(predicted)
    candidates = np.asarray(candidates)
    dist = np.abs(predicted[:, None] - candidates[None, :])
    if dist.shape[1] > 1:
        srt = np.sort(dist, axis=1)
        if np.any(srt[:, 1] < AMBIGUITY_FACTOR * srt[:, 0]):
            raise _Ambiguous()
    out = np.empty(len(predicted), dtype=int)
    free_rows, free_cols = set(range(len(predicted))), set(range(len(candidates)))
    for flat in np.argsort(dist, axis=None):
        i, j = divmod(int(flat), dist.shape[1])
        if i in free_rows and j in free_cols:
            out[i] = j
            free_rows.discard(i)
            free_cols.discard(j)
    return out


class Sample(NamedTuple):
    t: float
    x: np.ndarray
    v: np.ndarray
    ybar: complex
    separation: float  # double-pair separation in the full root set
    p_residual: float
    dp_residual: float
    discrepancy: float  # |extracted double root - tracked x1|


class _X1Point(NamedTuple):
    t: float
    w: complex
    wdot: complex


class AlgebraicSolver:
    """Runs the pipeline for one request; :func:`solve` is the usual entry point."""

    def __init__(self, request: SolveRequest):
        self.request = request
        self.spec = spec = request.spec
        init = request.initial
        self.y0 = coefficients_from_zeros(init)
        self.ydot0 = coefficient_velocities_from_zeros(init)
        self.flow = CoefficientFlow(spec, self.y0, self.ydot0)
        self.max_step = request.max_step or spec.basic_period / 200.0
        self.bisections = 0

    def coefficients(self, t: float):
        return self.flow(t)

    def _sample(self, t, x1, simple_predicted, y, ydot):
        spec = self.spec
        ybar = reconstruct_ybar(x1, y, spec)
        y = y.copy()
        y[spec.mbar - 1] = ybar
        full = roots(MonicPolynomial(y))
        dr = identify_double_root(full, hint=x1)
        discrepancy = abs(dr.x1 - x1)
        simple = dr.simple
        if discrepancy > CLUSTER_TOL:
            # fall back to dropping the two roots nearest the tracked x1
            order = np.argsort(np.abs(np.asarray(full.roots) - x1))
            simple = [full.roots[k] for k in order[2:]]
        if len(simple_predicted):
            assign = _greedy_assignment(simple_predicted, simple)
            simple = [simple[j] for j in assign]
        x = np.array([x1, *simple], dtype=np.complex128)
        self._check_separation(t, x)
        state = ZeroState.from_arrays(x, guard=0.0)
        v = zero_velocities(state, ydot, spec)
        full_poly = np.concatenate([[1.0], y])
        scale = max(1.0, float(np.linalg.norm(y, np.inf)))
        p_res = abs(np.polyval(full_poly, x1)) / scale
        dp_res = abs(np.polyval(np.polyder(full_poly), x1)) / scale
        return Sample(t, x, v, ybar, dr.separation, p_res, dp_res, discrepancy)

    @staticmethod
    def _check_separation(t, x):
        if abs(x[0]) < DEGENERACY_GUARD:
            raise SingularConfigurationError(
                f"x1 reaches the origin near t={t:.6g}", pair=(0, 0),
                separation=abs(x[0]), time=t)
        i, j, d = closest_pair(list(x))
        if d < DEGENERACY_GUARD:
            raise SingularConfigurationError(
                f"zeros {i + 1} and {j + 1} collide near t={t:.6g} (|dx| = {d:.3e})",
                pair=(i, j), separation=d, time=t)

    def start(self) -> Sample:
        init = self.request.initial
        start = init.x1 if self.request.start_x1 is None else complex(self.request.start_x1)
        y, ydot = self.coefficients(0.0)
        cands = x1_constraint_roots(y, self.spec).roots
        k = int(np.argmin(np.abs(np.asarray(cands) - start)))
        w = _constraint_newton(cands[k], y, self.spec)
        mismatch = abs(w - init.x1)
        if mismatch > START_TOL * max(1.0, abs(init.x1)):
            raise TrackingError(
                f"t=0 consistency check failed: starting branch w={w:.6g} differs from "
                f"x1(0)={init.x1:.6g} by {mismatch:.3e}; the other constraint roots are "
                + ", ".join(f"{c:.6g}" for i, c in enumerate(cands) if i != k),
                time=0.0, reason="start")
        return self._sample(0.0, w, np.asarray(init.simple, dtype=np.complex128), y, ydot)

    def step(self, prev: Sample, t: float) -> Sample:
        dt = t - prev.t
        y, ydot = self.coefficients(t)
        cands = x1_constraint_roots(y, self.spec).roots
        k, _ = _match_nearest(cands, prev.x[0] + prev.v[0] * dt)
        x1 = _constraint_newton(cands[k], y, self.spec)
        predicted = prev.x[1:] + prev.v[1:] * dt
        return self._sample(t, x1, predicted, y, ydot)

    def advance(self, prev, t_target: float, step=None):
        """Step from ``prev`` to ``t_target``, bisecting on ambiguity.

        ``step(prev, t)`` defaults to the full-state step; it signals an
        undecidable match by raising :class:`_Ambiguous`.
        """
        step = step or self.step
        span = t_target - prev.t
        n = max(1, int(math.ceil(span / self.max_step - 1e-9)))
        min_dt = span / n / 2.0 ** MAX_BISECTIONS
        pending = [prev.t + span * (i / n) for i in range(n, 0, -1)]
        pending[0] = t_target
        cur = prev
        while pending:
            tb = pending[-1]
            try:
                cur = step(cur, tb)
                pending.pop()
            except _Ambiguous:
                if tb - cur.t <= min_dt * (1 + 1e-9):
                    raise TrackingError(
                        f"tracking stays ambiguous near t={cur.t:.6g} after "
                        f"{MAX_BISECTIONS} bisections; a branch collision (zeros colliding) "
                        "is likely", time=cur.t, reason="refinement-limit") from None
                self.bisections += 1
                pending.append(0.5 * (cur.t + tb))
        return cur

    def x1_velocity(self, w: complex, y, ydot) -> complex:
        """dx1/dt = -g_t/g_w on the constraint g(w, t) = 0."""
        c = np.asarray(constraint_coefficients(y, self.spec), dtype=np.complex128)
        ct = np.asarray(constraint_coefficients(ydot, self.spec), dtype=np.complex128)
        ct[0] = 0.0
        return complex(-np.polyval(ct, w) / np.polyval(np.polyder(c), w))

    def start_x1(self) -> "_X1Point":
        w = self.start().x[0]
        y, ydot = self.coefficients(0.0)
        return _X1Point(0.0, w, self.x1_velocity(w, y, ydot))

    def step_x1(self, prev: "_X1Point", t: float) -> "_X1Point":
        y, ydot = self.coefficients(t)
        cands = x1_constraint_roots(y, self.spec).roots
        k, _ = _match_nearest(cands, prev.w + prev.wdot * (t - prev.t))
        w = _constraint_newton(cands[k], y, self.spec)
        return _X1Point(t, w, self.x1_velocity(w, y, ydot))

    def run(self) -> TrackedTrajectory:
        times = self.request.t_grid
        samples = [self.start()]
        for t in times[1:]:
            samples.append(self.advance(samples[-1], t))
        x = np.array([s.x for s in samples])
        v = np.array([s.v for s in samples])
        diagnostics = {
            "separation": np.array([s.separation for s in samples]),
            "p_residual": np.array([s.p_residual for s in samples]),
            "dp_residual": np.array([s.dp_residual for s in samples]),
            "discrepancy": np.array([s.discrepancy for s in samples]),
            "bisections": self.bisections,
        }
        return TrackedTrajectory(times=np.array(times), x=x, v=v, source="algebraic",
                                 ybar=np.array([s.ybar for s in samples]),
                                 diagnostics=diagnostics)


def track_x1(request: SolveRequest) -> np.ndarray:
    """The double zero x1 on ``request.t_grid`` from the constraint roots alone.

    Each step predicts x1 with its implicit-function velocity and takes the
    nearest constraint root; the simple zeros are never computed.
    """
    solver = AlgebraicSolver(request)
    point = solver.start_x1()
    path = [point.w]
    for t in request.t_grid[1:]:
        point = solver.advance(point, t, solver.step_x1)
        path.append(point.w)
    return np.array(path, dtype=np.complex128)


def solve(request: SolveRequest) -> TrackedTrajectory:
    """Algebraic trajectory of all zeros on ``request.t_grid``.

    Raises
    ------
    TrackingError
        If the starting branch is inconsistent with the initial x1, or a step
        stays ambiguous after ``MAX_BISECTIONS`` halvings.
    SingularConfigurationError
        If zeros come closer than the degeneracy guard.
    ConvergenceError
        If the root finder fails.
    """
    return AlgebraicSolver(request).run()
