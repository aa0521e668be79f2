"""Exceptions raised by the numerical guards."""


class GuardViolation(RuntimeError):
    """A numerical guard (truncation, step size, positivity) was violated."""


class TruncationError(GuardViolation):
    """Population leaks past the Fock-space truncation."""


class StepSizeUnderflow(GuardViolation):
    """The adaptive integrator could not meet its tolerance."""
