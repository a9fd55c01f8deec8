import math
from fractions import Fraction

import numpy as np
import pytest

from doubleroot.laws import CoefficientLaw, LawKind, ModelSpec
from doubleroot.polynomial import ZeroState

SEED = 20240611


def random_state(rng, N, min_sep=0.1, min_abs=0.1, radius=1.0, speed=1.0):
    """Zeros in the disk of ``radius`` with pairwise separation >= min_sep."""
    while True:
        r = radius * np.sqrt(rng.uniform(size=N))
        th = rng.uniform(0, 2 * np.pi, size=N)
        x = r * np.exp(1j * th)
        if abs(x[0]) < min_abs:
            continue
        d = np.abs(x[:, None] - x[None, :]) + np.eye(N) * 10
        if d.min() < min_sep:
            continue
        v = speed * (rng.standard_normal(N) + 1j * rng.standard_normal(N))
        return ZeroState.from_arrays(x, v)


def random_law(rng, omega=2 * math.pi):
    kind = rng.choice(["lv", "ho", "da"])
    r = Fraction(int(rng.integers(1, 5)) * int(rng.choice([-1, 1])), int(rng.integers(1, 7)))
    if kind == "lv":
        return CoefficientLaw(LawKind.LINEAR_VELOCITY, r=r, omega=omega)
    if kind == "ho":
        return CoefficientLaw(LawKind.HARMONIC, r=r, omega=omega)
    return CoefficientLaw(LawKind.DAMPED, a=float(rng.uniform(0.05, 2.0)), omega=omega)


def random_spec(rng, N, mbar=None):
    mbar = int(rng.integers(1, N + 2)) if mbar is None else mbar
    return ModelSpec(N, mbar, {m: random_law(rng) for m in range(1, N + 2) if m != mbar})


def expand_series(roots_series):
    """Coefficients of prod (z - r_k(t)) as truncated Taylor series in t.

    ``roots_series`` has shape (K, 3): value, first and second derivative of
    every root. Returns an array (K+1, 3) of (y, y', y'') with y_0 = 1 first.
    Plain polynomial multiplication, independent of the package kernels.
    """
    def mul(a, b):  # product of two order-2 series (value, d/dt, d2/dt2)
        return np.array([a[0] * b[0], a[1] * b[0] + a[0] * b[1],
                         a[2] * b[0] + 2 * a[1] * b[1] + a[0] * b[2]])

    poly = [np.array([1.0, 0.0, 0.0], dtype=complex)]
    for r in roots_series:
        factor = [np.array([1.0, 0, 0], dtype=complex), -np.asarray(r, dtype=complex)]
        new = [np.zeros(3, dtype=complex) for _ in range(len(poly) + 1)]
        for i, p in enumerate(poly):
            for j, f in enumerate(factor):
                new[i + j] = new[i + j] + mul(p, f)
        poly = new
    return np.array(poly)


def double_root_series(x, v, a):
    """Series of all N+1 roots with x1 listed twice."""
    rows = [(x[0], v[0], a[0])] + [(x[k], v[k], a[k]) for k in range(len(x))]
    return np.array(rows, dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
