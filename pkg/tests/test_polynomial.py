import numpy as np
import pytest

from conftest import random_state
from doubleroot.errors import AmbiguityError, ConvergenceError, SingularConfigurationError
from doubleroot.polynomial import (MonicPolynomial, ZeroState, coefficient_velocities_from_zeros,
                                   coefficients_from_zeros, identify_double_root,
                                   polynomial_from_zeros, roots)


def test_coefficients_simple_case():
    s = ZeroState(1.0, (0.0,), 0.0, (0.0,), guard=0.0)
    np.testing.assert_array_equal(coefficients_from_zeros(s), [-2, 1, 0])


def test_coefficients_two_body_closed_form(rng):
    for _ in range(20):
        s = random_state(rng, 2)
        x1, x2 = s.positions
        expected = [-(2 * x1 + x2), x1**2 + 2 * x1 * x2, -x1**2 * x2]
        np.testing.assert_allclose(coefficients_from_zeros(s), expected, rtol=1e-14)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_coefficients_match_numpy_poly(rng, N):
    for _ in range(25):
        s = random_state(rng, N)
        x = s.positions
        expected = np.poly(np.concatenate([[x[0]], x]))[1:]
        np.testing.assert_allclose(coefficients_from_zeros(s, N), expected, rtol=1e-12,
                                   atol=1e-14)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_vieta_extremes(rng, N):
    for _ in range(25):
        s = random_state(rng, N)
        x = s.positions
        y = coefficients_from_zeros(s)
        assert abs(y[0] + 2 * x[0] + x[1:].sum()) <= 1e-12 * np.abs(x).sum()
        last = (-1) ** (N + 1) * x[0] ** 2 * np.prod(x[1:])
        assert abs(y[-1] - last) <= 1e-12 * abs(last)


def test_velocities_two_body_closed_form(rng):
    for _ in range(20):
        s = random_state(rng, 2)
        (x1, x2), (v1, v2) = s.positions, s.velocities
        expected = [-(2 * v1 + v2), 2 * (v1 * (x1 + x2) + v2 * x1),
                    -(2 * v1 * x1 * x2 + v2 * x1**2)]
        np.testing.assert_allclose(coefficient_velocities_from_zeros(s), expected, rtol=1e-13)


def test_velocities_vanish_at_rest(rng):
    s = random_state(rng, 4)
    rest = ZeroState.from_arrays(s.positions, np.zeros(4))
    assert np.all(coefficient_velocities_from_zeros(rest) == 0)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_velocities_finite_difference(rng, N):
    h = 1e-6
    for _ in range(25):
        s = random_state(rng, N)
        x, v = s.positions, s.velocities
        plus = coefficients_from_zeros(ZeroState.from_arrays(x + h * v, v))
        minus = coefficients_from_zeros(ZeroState.from_arrays(x - h * v, v))
        fd = (plus - minus) / (2 * h)
        exact = coefficient_velocities_from_zeros(s)
        assert np.max(np.abs(fd - exact)) <= 1e-6 * max(1.0, np.max(np.abs(exact)))


def test_roots_of_z_times_square():
    rs = roots([-2, 1, 0])
    assert sorted(rs.roots, key=abs)[0] == pytest.approx(0, abs=1e-12)
    assert rs.pairing is not None
    i, j = rs.pairing
    assert abs(rs.roots[i] - 1) < 1e-7 and abs(rs.roots[j] - 1) < 1e-7


def test_roots_of_z2_plus_1():
    rs = roots(MonicPolynomial([0, 1]))
    assert rs.pairing is None
    got = sorted(rs.roots, key=lambda z: z.imag)
    assert got[0] == pytest.approx(-1j, abs=1e-14)
    assert got[1] == pytest.approx(1j, abs=1e-14)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_root_round_trip(rng, N):
    for _ in range(25):
        s = random_state(rng, N)
        dr = identify_double_root(roots(polynomial_from_zeros(s)))
        assert abs(dr.x1 - s.x1) <= 1e-7
        for xn in s.simple:
            assert min(abs(np.asarray(dr.simple) - xn)) <= 1e-10


def test_roots_reject_nonfinite():
    with pytest.raises(ValueError):
        roots([np.nan, 1.0])


def test_roots_report_non_convergence():
    with pytest.raises(ConvergenceError) as exc:
        roots([1e200, -3.0, 1e-300, 7.0, 2.0], max_iter=1)
    assert exc.value.residual is not None


def test_identify_trivial():
    dr = identify_double_root([0.0, 1.0, 1.0])
    assert dr.x1 == 1 and dr.simple == [0.0] and dr.separation == 0


def test_identify_perturbed(rng):
    x1, x2 = 0.4 - 0.3j, -0.7 + 0.2j
    coeffs = np.poly([x1, x1, x2])[1:]
    noisy = coeffs + 1e-9 * (rng.standard_normal(3) + 1j * rng.standard_normal(3))
    dr = identify_double_root(roots(noisy))
    assert abs(dr.x1 - x1) < 1e-4


def test_identify_hint_resolves_ties():
    d = 1e-3
    values = [1, 1 + d, 5, 5 + 2 * d]
    with pytest.raises(AmbiguityError):
        identify_double_root(values)
    dr = identify_double_root(values, hint=5)
    assert dr.x1 == pytest.approx(5 + d)
    assert sorted(dr.simple, key=abs) == [1, 1 + d]


def test_state_guard():
    with pytest.raises(SingularConfigurationError):
        ZeroState(1e-12, (1.0,), 0, (0,))
    with pytest.raises(SingularConfigurationError):
        ZeroState(1.0, (1.0 + 1e-12,), 0, (0,))
    with pytest.raises(SingularConfigurationError):
        ZeroState(1.0, (2.0, 2.0), 0, (0, 0))
    with pytest.raises(ValueError):
        ZeroState(np.nan, (2.0,), 0, (0,))


def test_double_root_constraint_on_built_polynomials(rng):
    for N in (2, 3, 4, 5):
        for _ in range(10):
            s = random_state(rng, N)
            p = polynomial_from_zeros(s)
            scale = max(1.0, np.max(np.abs(p.coeffs)))
            assert abs(p(s.x1)) <= 1e-9 * scale
            assert abs(p.derivative(s.x1)) <= 1e-9 * scale
