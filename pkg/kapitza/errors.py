"""
Exceptions
==========

Error hierarchy shared by the services and the CLI. Configuration problems
exit with code 2, numerical failures with code 3.
"""

from typing import Any, Dict, Optional


class KapitzaError(Exception):
    """Base exception for floquet-kapitza errors."""
    
    exit_code: int = 1
    
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}
    
    def to_record(self) -> Dict[str, Any]:
        """JSON-serializable error record for the CLI."""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": self.details,
        }


# =============================================================================
# Configuration Errors
# =============================================================================

class ConfigError(KapitzaError):
    """Raised when a run configuration cannot be used."""
    exit_code = 2


class ParseError(ConfigError):
    """Raised when a config file is malformed or names an unknown key."""
    pass


class ValidationError(ConfigError):
    """Raised when a config value violates a parameter invariant."""
    pass


# =============================================================================
# Numerical Errors
# =============================================================================

class NumericalError(KapitzaError):
    """Raised when a computation fails or leaves its domain of validity."""
    exit_code = 3


class InvalidParameter(NumericalError):
    """Raised when an operation's precondition is not met."""
    pass


class NonConvergence(NumericalError):
    """Raised when an eigen- or exponential solver fails its residual contract."""
    pass


class DimensionTooLarge(NumericalError):
    """Raised when a dense problem exceeds the configured maximum dimension."""
    pass


class DivergedTrajectory(NumericalError):
    """Raised when a classical trajectory leaves the finite domain."""
    pass


class DivergedNorm(NumericalError):
    """Raised when a wavefunction norm blows up under non-Hermitian evolution."""
    pass


class NonRealEffectivePotential(NumericalError):
    """Raised when the averaged pendulum potential acquires an imaginary part."""
    pass


class NoBoundState(NumericalError):
    """Raised when a potential well integral does not support a bound state."""
    pass


class NoTransitionFound(NumericalError):
    """Raised when no scanned frequency yields a persistently real spectrum."""
    pass


class EigenvalueAtZero(NumericalError):
    """Raised when a propagator eigenvalue is too small to take its logarithm."""
    pass


class ReflectanceOutOfRange(NumericalError):
    """Raised when a derived mirror reflectance leaves (0, 1]."""
    pass
