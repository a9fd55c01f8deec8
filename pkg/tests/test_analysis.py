import math

import numpy as np
import pytest

from doubleroot.analysis import compare, detect_period, successive_residuals
from doubleroot.integrator import IntegratorSettings, integrate
from doubleroot.presets import PRESETS, get_preset
from doubleroot.trajectory import TrackedTrajectory


def _synthetic(t, freqs, decay=0.0):
    # zero k moves on a circle with frequency freqs[k], spiralling in if decay > 0
    t = np.asarray(t)[:, None]
    w = 2 * math.pi * np.asarray(freqs)[None, :]
    centre = np.arange(len(freqs)) * 3.0
    amp = 1.0 + np.exp(-decay * t)
    x = centre + amp * np.exp(1j * w * t)
    v = amp * 1j * w * np.exp(1j * w * t) - decay * np.exp(-decay * t) * np.exp(1j * w * t)
    return TrackedTrajectory(t[:, 0], x, v, source="synthetic")


def test_synthetic_period_is_lcm():
    traj = _synthetic(np.linspace(0, 16, 1601), [1 / 4, 1 / 6])
    rep = detect_period(traj, 1.0, 16)
    assert rep.verdict == "periodic" and rep.multiple_of_T == 12
    assert rep.residual <= 1e-12
    assert rep.candidate_period == pytest.approx(12.0)


def test_constant_trajectory_has_period_one():
    t = np.linspace(0, 3, 31)
    x = np.tile([1 + 1j, -2.0], (31, 1))
    traj = TrackedTrajectory(t, x, np.zeros_like(x), source="synthetic")
    rep = detect_period(traj, 1.0, 3)
    assert (rep.multiple_of_T, rep.residual, rep.verdict) == (1, 0.0, "periodic")


def test_damped_spiral_is_asymptotic():
    traj = _synthetic(np.linspace(0, 20, 2001), [1.0, 1.0], decay=0.5)
    rep = detect_period(traj, 1.0, 20)
    assert rep.verdict == "asymptotic"
    d = np.asarray(rep.successive)
    assert np.all(np.diff(d[3:]) < 0)


def test_slow_decay_is_not_asymptotic():
    # exp(-0.2) ~ 0.82 per period misses the 20 % shrink requirement
    traj = _synthetic(np.linspace(0, 20, 2001), [1.0, 1.0], decay=0.2)
    assert detect_period(traj, 1.0, 20).verdict == "not_periodic"


def test_aperiodic_trajectory_is_rejected():
    traj = _synthetic(np.linspace(0, 10, 1001), [1 / math.sqrt(2), 1.0])
    rep = detect_period(traj, 1.0, 10)
    assert rep.verdict == "not_periodic"
    assert rep.residual > 1e-5


def test_period_checks_velocities_too():
    # positions return after T/2 for a zero oscillating on a line, velocities do not
    t = np.linspace(0, 2, 201)
    x = np.cos(2 * math.pi * t)[:, None] ** 2 + 0j
    v = (-2 * math.pi * np.sin(4 * math.pi * t))[:, None] + 0j
    traj = TrackedTrajectory(t, x, v, source="synthetic")
    assert detect_period(traj, 0.5, 4).multiple_of_T == 1
    x_only = TrackedTrajectory(t, np.cos(2 * math.pi * t)[:, None] + 0j,
                               (-2 * math.pi * np.sin(2 * math.pi * t))[:, None] + 0j, "s")
    assert detect_period(x_only, 0.5, 4).multiple_of_T == 2


def test_interpolated_period_between_samples():
    traj = _synthetic(np.linspace(0, 6.3, 64), [1 / 3, 1 / 2])
    rep = detect_period(traj, 1.0, 6, tol=1e-3)
    assert rep.multiple_of_T == 6


def test_short_trajectory_is_an_error():
    traj = _synthetic(np.linspace(0, 5, 51), [1.0])
    with pytest.raises(ValueError):
        detect_period(traj, 1.0, 6)
    with pytest.raises(ValueError):
        successive_residuals(traj, 1.0, 6)


@pytest.mark.parametrize("name,k", [("example-3.1.1", 12), ("example-3.2.1", 6)])
def test_published_periods(name, k):
    preset = get_preset(name)
    grid = np.linspace(0, 16, 3201)
    traj = integrate(preset.spec, preset.initial, grid)
    rep = detect_period(traj, 1.0, 16, tol=1e-5)
    assert (rep.verdict, rep.multiple_of_T) == ("periodic", k)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_tolerance_refinement_oracle(name):
    preset = PRESETS[name]
    loose = integrate(preset.spec, preset.initial, preset.t_grid, IntegratorSettings(rel_tol=1e-10))
    tight = integrate(preset.spec, preset.initial, preset.t_grid,
                      IntegratorSettings(rel_tol=1e-12, abs_tol=1e-14))
    # absolute budget on moderate orbits; close fast encounters are scaled by
    # the phase-space peak, which is what the step control measures against
    peak = np.max(np.abs(tight.phase()))
    budget = 1e-8 if peak < 100 else 1e-8 * peak
    assert compare(loose, tight).max_err <= budget


def test_compare_self_is_zero():
    traj = _synthetic(np.linspace(0, 2, 21), [0.5, 1.0, 1.5])
    rep = compare(traj, traj)
    assert rep.max_err == rep.velocity_err == rep.assignment_err == 0
    assert rep.per_zero_err == [0, 0, 0]


def test_compare_finds_worst_point():
    a = _synthetic(np.linspace(0, 2, 21), [0.5, 1.0])
    x = a.x.copy()
    x[7, 1] += 0.25j
    rep = compare(a, TrackedTrajectory(a.times, x, a.v, "shifted"))
    assert rep.max_err == pytest.approx(0.25)
    assert rep.at_time == pytest.approx(a.times[7])
    assert rep.per_zero_err == pytest.approx([0.0, 0.25])
    assert rep.max_err == max(rep.per_zero_err)


def test_label_swap_shows_in_assignment_error():
    a = _synthetic(np.linspace(0, 2, 21), [0.5, 1.0, 1.5])
    swapped = TrackedTrajectory(a.times, a.x[:, [0, 2, 1]], a.v[:, [0, 2, 1]], "swapped")
    rep = compare(a, swapped)
    assert rep.max_err > 1.0
    assert rep.assignment_err == 0


def test_assignment_error_never_exceeds_labeled(rng):
    for _ in range(50):
        n = int(rng.integers(2, 5))
        t = np.linspace(0, 1, 5)
        xa = rng.standard_normal((5, n)) + 1j * rng.standard_normal((5, n))
        xb = xa + 0.3 * (rng.standard_normal((5, n)) + 1j * rng.standard_normal((5, n)))
        rep = compare(TrackedTrajectory(t, xa, xa, "a"), TrackedTrajectory(t, xb, xb, "b"))
        assert rep.assignment_err <= rep.max_err


def test_compare_rejects_grid_mismatch():
    a = _synthetic(np.linspace(0, 2, 21), [1.0])
    b = _synthetic(np.linspace(0, 2, 11), [1.0])
    with pytest.raises(ValueError):
        compare(a, b)
