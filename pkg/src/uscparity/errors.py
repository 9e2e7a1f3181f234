"""Exception types shared across the package."""


class UscParityError(Exception):
    """Base class for all package-specific errors."""


class InvalidArgumentError(UscParityError, ValueError):
    """Non-finite or out-of-contract argument passed to a public operation."""


class DegenerateDetuningError(UscParityError, ValueError):
    """Qubit and resonator frequencies coincide; dispersive expansion invalid."""


class IntegrationError(UscParityError, RuntimeError):
    """Adaptive integration failed (step-size underflow)."""

    def __init__(self, message: str, t_fail: float):
        super().__init__(message)
        self.t_fail = t_fail


class InsufficientHorizonError(UscParityError, ValueError):
    """Trajectory does not cover the steady-state averaging window."""


class TruncationLeakError(UscParityError, RuntimeError):
    """Population leaked into the top Fock levels; increase the cutoff."""


class DimensionGuardError(UscParityError, ValueError):
    """Requested Hilbert-space dimension exceeds the runtime guard."""


class QuadratureResolutionError(UscParityError, RuntimeError):
    """Quadrature grid too coarse (refinement check failed)."""


class GridAlignmentError(UscParityError, ValueError):
    """Trajectories cannot be aligned (query outside interpolation range)."""


class StateInvariantError(UscParityError, RuntimeError):
    """Density-matrix invariant (trace/Hermiticity/positivity) violated."""


class ClosedFormInconsistencyError(UscParityError, RuntimeError):
    """A closed-form expression produced a non-negligible imaginary residue."""
