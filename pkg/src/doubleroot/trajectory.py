"""Sampled zero trajectories shared by both pipelines."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polynomial import ZeroState


@dataclass
class TrackedTrajectory:
    """Zero positions and velocities on a time grid.

    ``x`` and ``v`` have shape ``(len(times), N)``; column 0 is the double
    zero. ``source`` is ``"algebraic"`` or ``"direct"``.
    """

    times: np.ndarray
    x: np.ndarray
    v: np.ndarray
    source: str
    ybar: np.ndarray = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.x = np.asarray(self.x, dtype=np.complex128)
        self.v = np.asarray(self.v, dtype=np.complex128)
        if self.x.shape != self.v.shape or self.x.shape[0] != self.times.shape[0]:
            raise ValueError("times, x and v disagree in shape")

    @property
    def N(self) -> int:
        return self.x.shape[1]

    def __len__(self):
        return self.times.shape[0]

    @property
    def states(self) -> list:
        return [ZeroState.from_arrays(xk, vk, guard=0.0) for xk, vk in zip(self.x, self.v)]

    def phase(self) -> np.ndarray:
        """``(len(times), 2N)`` array of ``[x, v]`` rows."""
        return np.hstack([self.x, self.v])

    def index_of(self, t: float, tol: float = 1e-9) -> int:
        k = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[k] - t) > tol * max(1.0, abs(t)):
            raise KeyError(f"no sample at t={t}")
        return k

    def phase_at(self, t: float) -> np.ndarray:
        """State at ``t``: the sample if present, else cubic Hermite in x.

        Velocities between samples come from the derivative of the same
        Hermite cubic.
        """
        try:
            k = self.index_of(t)
            return np.concatenate([self.x[k], self.v[k]])
        except KeyError:
            pass
        if not self.times[0] <= t <= self.times[-1]:
            raise ValueError(f"t={t} outside [{self.times[0]}, {self.times[-1]}]")
        k = int(np.searchsorted(self.times, t)) - 1
        t0, t1 = self.times[k], self.times[k + 1]
        h = t1 - t0
        s = (t - t0) / h
        x0, x1, v0, v1 = self.x[k], self.x[k + 1], self.v[k], self.v[k + 1]
        h00 = 2 * s**3 - 3 * s**2 + 1
        h10 = s**3 - 2 * s**2 + s
        h01 = -2 * s**3 + 3 * s**2
        h11 = s**3 - s**2
        xs = h00 * x0 + h10 * h * v0 + h01 * x1 + h11 * h * v1
        d00 = (6 * s**2 - 6 * s) / h
        d10 = 3 * s**2 - 4 * s + 1
        d01 = (-6 * s**2 + 6 * s) / h
        d11 = 3 * s**2 - 2 * s
        vs = d00 * x0 + d10 * v0 + d01 * x1 + d11 * v1
        return np.concatenate([xs, vs])
