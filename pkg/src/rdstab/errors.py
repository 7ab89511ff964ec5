"""Exception hierarchy shared by every module of the package."""


class RDStabError(Exception):
    """Base class for all package errors."""


class DomainError(RDStabError, ValueError):
    """A parameter or argument lies outside its admissible domain."""


class NonFiniteError(RDStabError, ArithmeticError):
    """A nonlinearity produced NaN or infinity where a finite value is required."""


class RootError(RDStabError):
    """No sign change was found for a scalar root search."""


class MultiRootError(RootError):
    """More than one bracket was found where a unique root is expected."""


class PreconditionError(RDStabError):
    """An operation was called on inputs that violate its stated precondition."""


class TruncationError(RDStabError):
    """The spectrum truncation is too short to resolve the unstable band."""


class SublinearityError(RDStabError):
    """phi(s)/s increases somewhere on the scan grid."""


class BlowupError(RDStabError):
    """A simulated field exceeded the blow-up threshold."""


class StepError(RDStabError):
    """The adaptive step size underflowed."""


class ConfigError(RDStabError, ValueError):
    """A configuration file could not be parsed or validated."""
