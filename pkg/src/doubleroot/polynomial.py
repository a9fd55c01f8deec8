"""Monic polynomials with one double zero: zero/coefficient maps and roots."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import kernels
from .errors import AmbiguityError, ConvergenceError, SingularConfigurationError

#: ZeroState constructors reject separations (and |x1|) below this.
DEGENERACY_GUARD = 1e-10
#: Two roots closer than this are reported as the numerically double root.
CLUSTER_TOL = 1e-5


def _as_complex_tuple(values) -> tuple:
    return tuple(complex(v) for v in values)


def closest_pair(points: Sequence[complex]):
    """Return ``(i, j, distance)`` of the closest pair, or ``None``."""
    best = None
    for i, j in itertools.combinations(range(len(points)), 2):
        d = abs(points[i] - points[j])
        if best is None or d < best[2]:
            best = (i, j, d)
    return best


@dataclass(frozen=True)
class ZeroState:
    """Positions and velocities of the N zeros; ``x1`` is the double one.

    Construction validates finiteness and the non-degeneracy guard.
    """

    x1: complex
    simple: tuple
    v1: complex = 0j
    vsimple: Optional[tuple] = None
    guard: float = field(default=DEGENERACY_GUARD, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "x1", complex(self.x1))
        object.__setattr__(self, "v1", complex(self.v1))
        simple = _as_complex_tuple(self.simple)
        object.__setattr__(self, "simple", simple)
        vs = (0j,) * len(simple) if self.vsimple is None else _as_complex_tuple(self.vsimple)
        if len(vs) != len(simple):
            raise ValueError("vsimple must match simple in length")
        object.__setattr__(self, "vsimple", vs)
        if not len(simple):
            raise ValueError("need at least one simple zero (N >= 2)")
        values = np.array((self.x1, self.v1) + simple + vs)
        if not np.all(np.isfinite(values)):
            raise ValueError("non-finite zero state")
        x = self.positions
        if abs(self.x1) < self.guard:
            raise SingularConfigurationError(
                f"|x1| = {abs(self.x1):.3e} is below the guard", pair=(0, 0),
                separation=abs(self.x1))
        i, j, d = closest_pair(list(x))
        if d < self.guard:
            raise SingularConfigurationError(
                f"zeros {i + 1} and {j + 1} coincide (|dx| = {d:.3e})", pair=(i, j),
                separation=d)

    @property
    def N(self) -> int:
        return 1 + len(self.simple)

    @property
    def positions(self) -> np.ndarray:
        return np.array((self.x1,) + self.simple, dtype=np.complex128)

    @property
    def velocities(self) -> np.ndarray:
        return np.array((self.v1,) + self.vsimple, dtype=np.complex128)

    def as_vector(self) -> np.ndarray:
        """Phase-space vector ``[x1, x2.., v1, v2..]``."""
        return np.concatenate([self.positions, self.velocities])

    @classmethod
    def from_arrays(cls, x, v=None, guard=DEGENERACY_GUARD) -> "ZeroState":
        x = np.asarray(x, dtype=np.complex128)
        v = np.zeros_like(x) if v is None else np.asarray(v, dtype=np.complex128)
        return cls(x[0], tuple(x[1:]), v[0], tuple(v[1:]), guard=guard)

    @classmethod
    def from_vector(cls, vec, guard=DEGENERACY_GUARD) -> "ZeroState":
        vec = np.asarray(vec)
        n = vec.shape[0] // 2
        return cls.from_arrays(vec[:n], vec[n:], guard=guard)


@dataclass(frozen=True)
class MonicPolynomial:
    """z**n + coeffs[0] z**(n-1) + ... + coeffs[-1]; the leading 1 is implicit."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_complex_tuple(self.coeffs))
        if len(self.coeffs) < 1:
            raise ValueError("degree must be at least 1")

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def full(self) -> np.ndarray:
        """Coefficient array leading-first, including the implicit 1."""
        return np.array((1.0,) + self.coeffs, dtype=np.complex128)

    def __call__(self, z):
        return np.polyval(self.full(), z)

    def derivative(self, z):
        return np.polyval(np.polyder(self.full()), z)


class RootSet(NamedTuple):
    roots: tuple
    pairing: Optional[tuple] = None
    separation: Optional[float] = None
    residual: float = 0.0
    refined: Optional[complex] = None  # the paired double root polished on p'


class DoubleRoot(NamedTuple):
    x1: complex
    simple: list
    separation: float


def coefficients_from_zeros(state: ZeroState, N: Optional[int] = None) -> np.ndarray:
    """Coefficients y_1..y_{N+1} of (z - x1)**2 prod (z - x_n).

    Equivalent to ``(-1)**m`` times the elementary symmetric polynomials of
    ``(x1, x1, x2, ..., xN)``.
    """
    if N is not None and N != state.N:
        raise ValueError(f"state has N={state.N}, expected {N}")
    out = np.empty(state.N + 2, dtype=np.complex128)
    kernels.expand_double_root(state.positions, out)
    return out[1:]


def coefficient_velocities_from_zeros(state: ZeroState, N: Optional[int] = None) -> np.ndarray:
    """Time derivatives of :func:`coefficients_from_zeros` along the state."""
    if N is not None and N != state.N:
        raise ValueError(f"state has N={state.N}, expected {N}")
    out = np.empty(state.N + 2, dtype=np.complex128)
    kernels.expand_double_root_velocity(state.positions, state.velocities, out)
    return out[1:]


def polynomial_from_zeros(state: ZeroState) -> MonicPolynomial:
    return MonicPolynomial(coefficients_from_zeros(state))


def roots(p, max_iter: int = 500, cluster_tol: float = CLUSTER_TOL) -> RootSet:
    """All roots of a monic polynomial by Aberth-Ehrlich iteration.

    ``p`` is a :class:`MonicPolynomial` or the sequence y_1..y_n. The closest
    pair is recorded in ``pairing`` when closer than ``cluster_tol``.

    Raises
    ------
    ConvergenceError
        If some root has not reached rounding-level backward error within
        ``max_iter`` sweeps; the worst relative residual is attached.
    """
    if not isinstance(p, MonicPolynomial):
        p = MonicPolynomial(p)
    coeffs = p.full()
    if not np.all(np.isfinite(coeffs)):
        raise ValueError("non-finite polynomial coefficients")
    found = np.empty(p.degree, dtype=np.complex128)
    status, _, residual = kernels.aberth(coeffs, found, max_iter)
    if status != kernels.OK:
        raise ConvergenceError(
            f"root finder did not converge in {max_iter} sweeps "
            f"(relative residual {residual:.3e})", residual=residual)
    found = tuple(complex(z) for z in found)
    pair = closest_pair(found)
    if pair is not None and pair[2] < cluster_tol:
        refined = _polish_double(coeffs, 0.5 * (found[pair[0]] + found[pair[1]]))
        return RootSet(found, (pair[0], pair[1]), pair[2], residual, refined)
    return RootSet(found, None, None if pair is None else pair[2], residual)


def _polish_double(coeffs, z: complex, max_iter: int = 8) -> complex:
    """Newton on p' from the pair midpoint.

    A double root of p is a simple root of p', so this recovers it to
    rounding accuracy, where the Aberth pair itself is only good to about
    the square root of it.
    """
    d1 = np.polyder(coeffs)
    d2 = np.polyder(d1)
    for _ in range(max_iter):
        den = np.polyval(d2, z)
        if den == 0:
            break
        step = np.polyval(d1, z) / den
        z -= step
        if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(z)):
            break
    return complex(z)


def identify_double_root(rs, hint: Optional[complex] = None) -> DoubleRoot:
    """Pick the double root out of a root set.

    The closest pair wins and its midpoint is returned as ``x1`` (for a
    :class:`RootSet` from :func:`roots`, the midpoint polished on p'). When the
    second-closest pair is within a factor 2 of the closest, the choice is
    ambiguous: with a ``hint`` every pair in that band is a candidate and the
    one whose midpoint lies nearest the hint wins, without one
    :class:`AmbiguityError` is raised.
    """
    values = list(rs.roots if isinstance(rs, RootSet) else rs)
    if len(values) < 3:
        raise ValueError("need at least three roots (N >= 2)")
    pairs = sorted(
        (abs(values[i] - values[j]), i, j)
        for i, j in itertools.combinations(range(len(values)), 2))
    best = pairs[0]
    band = [pr for pr in pairs if pr[0] <= 2.0 * best[0]]
    if len(band) > 1:
        if hint is None:
            raise AmbiguityError(
                f"closest separations {band[0][0]:.3e} and {band[1][0]:.3e} are "
                "within a factor 2; pass a hint")
        best = min(band, key=lambda pr: abs(0.5 * (values[pr[1]] + values[pr[2]]) - hint))
    sep, i, j = best
    x1 = 0.5 * (values[i] + values[j])
    if isinstance(rs, RootSet) and rs.refined is not None and set(rs.pairing) == {i, j}:
        x1 = rs.refined
    simple = [z for k, z in enumerate(values) if k not in (i, j)]
    return DoubleRoot(x1, simple, sep)
