"""Exception hierarchy shared by all zxzcert modules."""


class ZXZCertError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(ZXZCertError, ValueError):
    """Operands act on different numbers of qubits."""


class DomainError(ZXZCertError, ValueError):
    """An argument lies outside the domain of the operation."""


class ResourceError(ZXZCertError, RuntimeError):
    """The request exceeds the dense-simulation size limit."""


class ImpossibleOutcomeError(ZXZCertError, ValueError):
    """A measurement outcome has (numerically) zero probability."""


class InvalidStateError(ZXZCertError, ValueError):
    """A matrix is not a valid density operator."""


class InconsistentCorrelatorsError(ZXZCertError, ValueError):
    """Correlator values that no physical state can produce."""


class NoWCStateError(DomainError):
    """No worst-case state exists for the requested (z, n)."""


class InsufficientDataError(ZXZCertError, ValueError):
    """Too few complete coincidences to form an estimate."""
