"""Exception hierarchy. CLI exit codes are attached to the classes."""


class DoubleRootError(Exception):
    exit_code = 3


class ConfigError(DoubleRootError, ValueError):
    """Invalid user configuration; ``field`` names the offending entry."""

    exit_code = 2

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class ContractError(DoubleRootError):
    """An operation was called outside its precondition."""


class SingularConfigurationError(DoubleRootError):
    """Zeros collide (or x1 vanishes) within the degeneracy guard."""

    exit_code = 4

    def __init__(self, message, pair=None, separation=None, time=None):
        super().__init__(message)
        self.pair = pair
        self.separation = separation
        self.time = time


class ConvergenceError(DoubleRootError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class AmbiguityError(DoubleRootError):
    pass


class TrackingError(AmbiguityError):
    """Continuation could not pick a branch unambiguously."""

    def __init__(self, message, time=None, reason="ambiguous"):
        super().__init__(message)
        self.time = time
        self.reason = reason


class IntegrationError(DoubleRootError):
    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time
