"""Exception and warning types raised across the package."""


class FairGeomError(ValueError):
    """Base class for all package errors."""


class DimensionMismatch(FairGeomError):
    pass


class NotStochastic(FairGeomError):
    pass


class SingularChannel(FairGeomError):
    pass


class ZeroMassMarginal(FairGeomError):
    pass


class ZeroMassReference(FairGeomError):
    pass


class ZeroMassOutput(FairGeomError):
    pass


class AbsoluteContinuityViolation(FairGeomError):
    pass


class ConvergenceFailure(FairGeomError, ArithmeticError):
    pass


class InvalidPerturbation(FairGeomError):
    pass


class NoFeasibleDirection(FairGeomError):
    pass


class NonpositiveRate(FairGeomError):
    pass


class InvalidReconstruction(FairGeomError):
    """A reconstructed conditional left the probability simplex.

    This means epsilon is too large for the prior: the closed-form design
    cannot be realized by any mechanism.
    """


class TooManyParameters(FairGeomError):
    pass


class UnsupportedCardinality(FairGeomError):
    pass


class ConfigError(FairGeomError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class AcceptanceDeviation(FairGeomError):
    def __init__(self, quantity: str, message: str):
        super().__init__(f"{quantity}: {message}")
        self.quantity = quantity


class EpsilonOutOfRange(UserWarning):
    """Epsilon is at or above min(c1, c2); second-order approximations may not hold."""


class OracleError(FairGeomError):
    """The brute-force search observed something that must not happen."""
