"""Exception hierarchy.

Every exception carries the name of the module that raised it so the
command line front end can print a one-line diagnostic.
"""


class TBPError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message, module=None):
        super().__init__(message)
        self.module = module or "coupled_tbp"

    def __str__(self):
        return f"[{self.module}] {super().__str__()}"


class InputError(TBPError, ValueError):
    """Invalid parameters, malformed files or inconsistent arguments."""


class GuardError(TBPError, ArithmeticError):
    """A numerical guard refused to produce a result."""


class DecayGuardError(GuardError):
    """Record too short: the envelope has not decayed enough to integrate."""


class DegeneracyError(GuardError):
    """Defective or ill-conditioned modal basis (near the exceptional point)."""
