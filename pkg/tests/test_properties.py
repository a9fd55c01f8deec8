"""Property-based checks on the formula layer."""

import math
from fractions import Fraction

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from doubleroot.laws import CoefficientLaw, LawKind, ModelSpec, flow
from doubleroot.polynomial import (ZeroState, coefficient_velocities_from_zeros,
                                   coefficients_from_zeros, identify_double_root,
                                   polynomial_from_zeros, roots)
from doubleroot.solver import constraint_coefficients, reconstruct_ybar
from doubleroot.zeros import divided_power

PROPS = settings(max_examples=100, derandomize=True, deadline=None)

coord = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, coord, coord)
rates = st.builds(Fraction, st.integers(-4, 4).filter(bool), st.integers(1, 6))


@st.composite
def states(draw, n_min=2, n_max=5, min_sep=0.1):
    N = draw(st.integers(n_min, n_max))
    x = draw(st.lists(cplx, min_size=N, max_size=N))
    v = draw(st.lists(cplx, min_size=N, max_size=N))
    arr = np.array(x)
    d = np.abs(arr[:, None] - arr[None, :]) + 10 * np.eye(N)
    assume(d.min() >= min_sep and abs(arr[0]) >= 0.1)
    return ZeroState.from_arrays(arr, np.array(v))


@st.composite
def laws(draw):
    kind = draw(st.sampled_from([LawKind.LINEAR_VELOCITY, LawKind.HARMONIC, LawKind.DAMPED]))
    if kind is LawKind.DAMPED:
        return CoefficientLaw(kind, a=draw(st.floats(0.05, 2.0)))
    return CoefficientLaw(kind, r=draw(rates))


@PROPS
@given(states())
def test_vieta_round_trip(s):
    dr = identify_double_root(roots(polynomial_from_zeros(s)))
    assert abs(dr.x1 - s.x1) <= 1e-7
    for xn in s.simple:
        assert np.min(np.abs(np.asarray(dr.simple) - xn)) <= 1e-7


@PROPS
@given(states())
def test_coefficient_velocity_matches_difference_quotient(s):
    h = 1e-6
    x, v = s.positions, s.velocities
    fd = (coefficients_from_zeros(ZeroState.from_arrays(x + h * v, v, guard=0.0))
          - coefficients_from_zeros(ZeroState.from_arrays(x - h * v, v, guard=0.0))) / (2 * h)
    exact = coefficient_velocities_from_zeros(s)
    assert np.max(np.abs(fd - exact)) <= 1e-5 * max(1.0, np.max(np.abs(exact)))


@PROPS
@given(st.integers(-6, 6), cplx, cplx)
def test_divided_power_identity(k, a, b):
    assume(abs(a - b) >= 1e-3 and min(abs(a), abs(b)) >= 0.2)
    lhs = divided_power(k, a, b) * (a - b)
    assert abs(lhs - (a**k - b**k)) <= 1e-12 * max(1.0, abs(a**k), abs(b**k))


@PROPS
@given(laws(), cplx, cplx, st.floats(-2, 2), st.floats(-2, 2))
def test_flow_group_property(law, y0, v0, t1, t2):
    two = flow(law, *flow(law, y0, v0, t1), t2)
    one = flow(law, y0, v0, t1 + t2)
    scale = max(1.0, abs(one[0]), abs(one[1]))
    assert abs(two[0] - one[0]) <= 1e-12 * scale
    assert abs(two[1] - one[1]) <= 1e-12 * scale


@PROPS
@given(states(), st.data())
def test_reconstructed_coefficient_keeps_double_root(s, data):
    N = s.N
    mbar = data.draw(st.integers(1, N + 1))
    spec = ModelSpec(N, mbar, {m: CoefficientLaw.harmonic(1) for m in range(1, N + 2)
                               if m != mbar})
    y = coefficients_from_zeros(s)
    masked = y.copy()
    masked[mbar - 1] = 0
    full = np.concatenate([[1.0], masked])
    full[mbar] = reconstruct_ybar(s.x1, masked, spec)
    scale = max(1.0, np.max(np.abs(full)))
    assert abs(np.polyval(full, s.x1)) <= 1e-9 * scale
    assert abs(np.polyval(np.polyder(full), s.x1)) <= 1e-8 * scale
    g = np.asarray(constraint_coefficients(masked, spec), dtype=complex)
    assert abs(np.polyval(g, s.x1)) <= 1e-9 * max(1.0, np.max(np.abs(g)))


@PROPS
@given(st.integers(2, 5), st.data())
def test_constraint_degree(N, data):
    mbar = data.draw(st.integers(1, N + 1))
    y = data.draw(st.lists(st.fractions(-5, 5), min_size=N + 1, max_size=N + 1))
    spec = ModelSpec(N, mbar, {m: CoefficientLaw.harmonic(1) for m in range(1, N + 2)
                               if m != mbar})
    g = constraint_coefficients(y, spec)
    assert g[0] == mbar
    assert len(g) - 1 == (N if mbar == N + 1 else N + 1)
    assert all(isinstance(c, (int, Fraction)) for c in g)


@PROPS
@given(laws(), cplx, cplx)
def test_linear_laws_preserve_structure(law, y0, v0):
    # velocity magnitude is conserved by linear-velocity flows, decays for damped ones
    y, v = flow(law, y0, v0, 1.7)
    if law.kind is LawKind.LINEAR_VELOCITY:
        assert math.isclose(abs(v), abs(v0), rel_tol=1e-12, abs_tol=1e-15)
    elif law.kind is LawKind.DAMPED:
        assert abs(v) <= abs(v0) + 1e-15
