"""Exception hierarchy for qopdist.

Every error raised by the library derives from :class:`QopdistError`, so
callers (the CLI in particular) can map families of failures to exit codes.
"""


class QopdistError(Exception):
    """Base class for all library errors."""


class ShapeError(QopdistError, ValueError):
    """Matrix or operator dimensions are inconsistent."""


class SizeError(QopdistError, ValueError):
    """A result would exceed the configured dimension cap."""


class DomainError(QopdistError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ValidationError(QopdistError, ValueError):
    """A quantum operation violates the trace-nonincreasing condition."""


class AnnihilatedStateError(DomainError):
    """The operation maps the input state to (numerically) zero trace."""

    def __init__(self, trace: float, floor: float):
        super().__init__(f"output trace {trace:.3e} <= floor {floor:.1e}; "
                         "normalized output is undefined for this input")
        self.trace = trace
        self.floor = floor


class RankDeficiencyError(QopdistError):
    """The Stinespring operator of the first operation lacks full column rank."""

    def __init__(self, null_dim: int, sigma_min: float, rank_tol: float):
        super().__init__(
            f"Stinespring operator is rank deficient: null space dimension {null_dim} "
            f"(smallest singular value {sigma_min:.3e} <= rank_tol {rank_tol:.3e})")
        self.null_dim = null_dim
        self.sigma_min = sigma_min
        self.rank_tol = rank_tol


class NumericalFailure(QopdistError, ArithmeticError):
    """An iterative numerical routine did not converge."""


class SdpConvergenceError(NumericalFailure):
    """The diamond-norm SDP did not reach the requested certified gap."""

    def __init__(self, message: str, gap: float, iterations: int):
        super().__init__(message)
        self.gap = gap
        self.iterations = iterations


class DegenerateSamplingError(QopdistError):
    """Every Monte Carlo sample was annihilated by one of the operations."""
