"""Exception and warning types shared across the package."""


class DiskvoltError(Exception):
    """Base class for all package errors."""


class PoleOnPath(DiskvoltError):
    """A closed-form denominator vanished at the evaluation point."""


class TruncationOverflow(DiskvoltError):
    """Requested truncation degree exceeds the configured maximum."""


class DivergenceDetected(DiskvoltError):
    """Per-annulus contributions stopped decaying toward the boundary."""


class ToleranceNotMet(DiskvoltError):
    """Quadrature error estimate exceeds the requested tolerances."""


class HypothesisViolation(DiskvoltError):
    """Parameters fall outside the range where a criterion applies."""


class InconclusiveNearThreshold(DiskvoltError):
    """A verdict landed inside the inconclusive band and strict mode was on."""


class SymbolParseError(DiskvoltError, ValueError):
    """A symbol string does not follow the grammar."""


class SlowDecayWarning(UserWarning):
    """Taylor tail at the diagnostic radius is above tolerance."""
