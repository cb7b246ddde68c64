"""
Failures of checks derived from the stability and convergence analysis.
"""


class VerificationFailure(AssertionError):
    """
    Error indicating that a computation succeeded but one of the properties
    it must satisfy does not hold.
    """


class EnergyViolation(VerificationFailure):
    """
    Error indicating that a time step violated the discrete energy
    inequality beyond the tolerance.
    """

    def __init__(self, message: str, step: int, excess: float) -> None:
        super().__init__(message)
        self.step: int = step
        self.excess: float = excess


class SlopeFailure(VerificationFailure):
    """
    Error indicating that observed convergence rates are below the expected
    rates or that errors do not decrease under refinement.
    """


class MMSInconsistent(VerificationFailure):
    """
    Error indicating that manufactured data does not satisfy the weak form
    of the problem with the exact fields.
    """


class InfSupFailure(VerificationFailure):
    """
    Error indicating that inf-sup estimates are not robust under refinement
    or do not show the expected dependence on the mesh size ratio.
    """
