"""Exception hierarchy shared by all modules."""


class HardyExtError(Exception):
    """Base class for every error raised by the toolkit."""


class PoleError(HardyExtError, ZeroDivisionError):
    """Argument lies on (or within tolerance of) a pole."""


class BracketError(HardyExtError):
    """A safeguarded root search could not establish a sign change."""


class DomainError(HardyExtError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class QuadratureError(HardyExtError):
    """A numerical integral did not reach the requested accuracy."""


class ConvergenceError(HardyExtError):
    """A series is not (absolutely) convergent for the given parameters."""


class DegenerateSetError(HardyExtError, ValueError):
    """Boundary points coincide or nearly coincide."""


class DimensionError(HardyExtError, ValueError):
    """Matrix or vector shapes are inconsistent."""


class RadiusError(HardyExtError):
    """Contour radius does not enclose exactly one root."""


class RepresentationError(HardyExtError):
    """Result would fall outside the representable function class."""


class UnlistedPoleError(HardyExtError):
    """A pole sits at a point that is not part of the boundary set."""
