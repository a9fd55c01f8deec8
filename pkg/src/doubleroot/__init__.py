"""Zeros of a monic polynomial that keeps one double zero while its coefficients
evolve under solvable laws: the algebraic solution, the explicit Newtonian
zero system, and tools to compare and analyse both."""

from .analysis import ComparisonReport, PeriodReport, compare, detect_period
from .errors import (AmbiguityError, ConfigError, ContractError, ConvergenceError,
                     DoubleRootError, IntegrationError, SingularConfigurationError,
                     TrackingError)
from .integrator import IntegratorSettings, integrate
from .laws import (CoefficientFlow, CoefficientLaw, LawKind, ModelSpec, flow,
                   minimal_period, second_derivative)
from .polynomial import (MonicPolynomial, RootSet, ZeroState, coefficient_velocities_from_zeros,
                         coefficients_from_zeros, identify_double_root, roots)
from .presets import get_preset, preset_names
from .printed import integrate_printed
from .solver import (SolveRequest, reconstruct_ybar, solve, track_x1,
                     x1_constraint_roots)
from .trajectory import TrackedTrajectory
from .zeros import divided_power, system_rhs, xdot_double, xdot_simple

__version__ = "0.1.0"

__all__ = [
    "AmbiguityError", "CoefficientFlow", "CoefficientLaw", "ComparisonReport",
    "ConfigError", "ContractError", "ConvergenceError", "DoubleRootError",
    "IntegrationError", "IntegratorSettings", "LawKind", "ModelSpec", "MonicPolynomial",
    "PeriodReport", "RootSet", "SingularConfigurationError", "SolveRequest",
    "TrackedTrajectory", "TrackingError", "ZeroState", "coefficient_velocities_from_zeros",
    "coefficients_from_zeros", "compare", "detect_period", "divided_power", "flow",
    "get_preset", "identify_double_root", "integrate", "integrate_printed",
    "minimal_period", "preset_names", "reconstruct_ybar", "roots", "second_derivative",
    "solve", "system_rhs", "track_x1", "x1_constraint_roots", "xdot_double", "xdot_simple",
]
