"""Period detection and trajectory comparison."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .trajectory import TrackedTrajectory

DEFAULT_PERIOD_TOL = 1e-5
#: Minimum per-period shrink factor of successive residuals for an asymptotic verdict.
ASYMPTOTIC_RATIO = 0.8


@dataclass
class PeriodReport:
    candidate_period: float
    multiple_of_T: int
    residual: float
    verdict: str  # "periodic", "not_periodic" or "asymptotic"
    residuals: list = field(default_factory=list)  # |state(kT) - state(0)| for k = 1..k_max
    successive: list = field(default_factory=list)  # |state((k+1)T) - state(kT)| for k = 0..k_max-1


@dataclass
class ComparisonReport:
    max_err: float
    at_time: float
    per_zero_err: list
    velocity_err: float
    assignment_err: float  # best over relabelings of the zeros, sample by sample

    def summary(self) -> str:
        return (f"max position error {self.max_err:.3e} at t={self.at_time:.6g}; "
                f"velocity {self.velocity_err:.3e}; relabeled {self.assignment_err:.3e}")


def _state(traj: TrackedTrajectory, t: float) -> np.ndarray:
    return traj.phase_at(t)


def successive_residuals(traj: TrackedTrajectory, period: float, k_max: int) -> np.ndarray:
    """d_k = |state((k+1)P) - state(kP)|_inf for k = 0..k_max-1."""
    _require_span(traj, k_max * period)
    states = [_state(traj, k * period) for k in range(k_max + 1)]
    return np.array([np.max(np.abs(states[k + 1] - states[k])) for k in range(k_max)])


def _require_span(traj, t_end):
    if traj.times[-1] < t_end * (1 - 1e-12) or traj.times[0] > 0:
        raise ValueError(
            f"trajectory covers [{traj.times[0]:.6g}, {traj.times[-1]:.6g}], "
            f"need [0, {t_end:.6g}]")


def detect_period(traj: TrackedTrajectory, T: float, k_max: int,
                  tol: float = DEFAULT_PERIOD_TOL, transient: int = 3) -> PeriodReport:
    """Smallest k <= k_max with |state(kT) - state(0)|_inf <= tol.

    Positions and velocities both count. Without such a k the verdict is
    ``"asymptotic"`` if the successive residuals d_k, k >= ``transient``,
    shrink by at least 20 % every period, else ``"not_periodic"``; the
    reported multiple is then the k with the smallest return residual.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    _require_span(traj, k_max * T)
    s0 = _state(traj, 0.0)
    residuals = [float(np.max(np.abs(_state(traj, k * T) - s0))) for k in range(1, k_max + 1)]
    successive = [float(d) for d in successive_residuals(traj, T, k_max)]
    for k, r in enumerate(residuals, start=1):
        if r <= tol:
            return PeriodReport(k * T, k, r, "periodic", residuals, successive)
    best = int(np.argmin(residuals)) + 1
    tail = successive[transient:]
    shrinking = len(tail) >= 2 and all(
        b <= ASYMPTOTIC_RATIO * a for a, b in zip(tail, tail[1:]))
    verdict = "asymptotic" if shrinking else "not_periodic"
    return PeriodReport(best * T, best, residuals[best - 1], verdict, residuals, successive)


def compare(a: TrackedTrajectory, b: TrackedTrajectory) -> ComparisonReport:
    """Max-norm position and velocity differences between two trajectories.

    Labels are taken as given. ``assignment_err`` repeats the position
    comparison with the best permutation of zeros at each sample, so a value
    well below ``max_err`` points at a label swap.
    """
    if a.times.shape != b.times.shape or not np.array_equal(a.times, b.times):
        raise ValueError("trajectories are sampled on different time grids")
    if a.N != b.N:
        raise ValueError(f"trajectories have N={a.N} and N={b.N}")
    dx = np.abs(a.x - b.x)
    per_zero = dx.max(axis=0)
    k = int(np.argmax(dx.max(axis=1)))
    perms = np.array(list(itertools.permutations(range(a.N))))
    relabeled = np.abs(a.x[:, None, :] - b.x[:, perms]).max(axis=2).min(axis=1)
    return ComparisonReport(
        max_err=float(per_zero.max()),
        at_time=float(a.times[k]),
        per_zero_err=[float(e) for e in per_zero],
        velocity_err=float(np.abs(a.v - b.v).max()),
        assignment_err=float(relabeled.max()),
    )
