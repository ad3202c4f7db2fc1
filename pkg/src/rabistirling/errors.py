"""Exception hierarchy shared by every module of the package."""


class RabiStirlingError(Exception):
    """Base class for all package errors."""


class DomainError(RabiStirlingError, ValueError):
    """An argument lies outside the domain of the quantity requested."""


class CriticalPointError(DomainError):
    """The effective coupling sits on the critical point g = 1."""


class DegenerateCycleError(DomainError):
    """The two isochores coincide (g1 == g2), so no work is produced."""


class NotAnEngineError(RabiStirlingError):
    """The cycle does not produce positive work from positive heat input.

    The offending result is kept on ``.result`` so callers can still report it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class SizeError(RabiStirlingError):
    """A Fock-space matrix would exceed the configured dimension cap.

    When raised from a convergence loop, ``.spectrum`` holds the best-effort
    levels obtained at the largest admissible size.
    """

    def __init__(self, message, spectrum=None):
        super().__init__(message)
        self.spectrum = spectrum


class ConvergenceError(RabiStirlingError):
    """The eigensolver failed to converge."""
