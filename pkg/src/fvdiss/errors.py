"""Exception types shared across the solver framework."""


class FvdissError(Exception):
    """Base class for all framework errors."""


class DegenerateBoundsError(FvdissError):
    """Wave-speed bounds coincide; the caller must use the Rusanov fallback."""


class UnsupportedKindError(FvdissError):
    """The requested solver kind is not available for this operation/model."""


class InvalidStateError(FvdissError):
    """A state violates physical admissibility (e.g. nonpositive density/pressure)."""


class NumericFailureError(FvdissError):
    """A numeric computation produced non-finite values or exhausted retries."""


class ConfigError(FvdissError):
    """Invalid run configuration or config-file contents."""
