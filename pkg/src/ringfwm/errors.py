"""Exception hierarchy shared across the toolkit."""


class RingFwmError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(RingFwmError, TypeError):
    """Arithmetic attempted between incompatible physical dimensions."""


class DomainError(RingFwmError, ValueError):
    """Input value outside the physical domain of an operation."""


class ConfigurationError(RingFwmError, ValueError):
    """Required parameter missing or inconsistent (e.g. gamma not fitted yet)."""


class ValidationError(RingFwmError, ValueError):
    """Structurally invalid input data (files, datasets)."""


class FitError(RingFwmError, RuntimeError):
    """A fit failed to converge or the data cannot constrain the parameter."""


class InsufficientSpanError(FitError):
    """Spectrum trace too narrow to determine a linewidth."""


class PairingError(RingFwmError, ValueError):
    """Two datasets share no common pump powers to compare at."""
