"""
Exception hierarchy for endtangle.
Every error raised by the toolkit derives from EndTangleError.
"""


class EndTangleError(Exception):
    """Base class for endtangle errors."""
    pass


class ConfigError(EndTangleError):
    """Raised when a budget or config value is invalid."""
    pass


class UnknownFamily(EndTangleError):
    """Raised when a graph family name is not in the catalogue."""
    pass


class InvalidParam(EndTangleError):
    """Raised when a family parameter is missing or out of range."""
    pass


class HorizonTooSmall(EndTangleError):
    """Raised when a truncation level does not reach past a separator."""
    pass


class WindowTooSmall(EndTangleError):
    """Raised when a vertex lies beyond the window a separation was built in."""
    pass


class BudgetExceeded(EndTangleError):
    """Raised when a computation needs more than the configured budget."""
    pass


class ResourceBudgetExceeded(BudgetExceeded):
    """Raised when a truncation would expand too many vertices."""
    pass


class CapExceeded(BudgetExceeded):
    """Raised when a finite oracle input is larger than its cap."""
    pass


class EmptySource(EndTangleError):
    """Raised when a flow is requested from an empty source set."""
    pass


class DominatedEnd(EndTangleError):
    """Raised when an unbounded cut shows a source dominates the end."""
    pass


class CountTooLarge(EndTangleError):
    """Raised when more disjoint rays are requested than exist."""
    pass


class InsufficientCohesion(EndTangleError):
    """Raised when deg + dom < k, so no relative decider of size k exists."""
    pass


class CohesionTooHigh(EndTangleError):
    """Raised when deg + dom >= k, so no limit point of shape (V, D) exists."""
    pass


class Inconclusive(EndTangleError):
    """Raised when the bounds computed within budget do not decide a question."""
    pass


class NotAnOrientation(EndTangleError):
    """Raised when a set of separations orients some separation twice."""
    pass


class InvariantViolation(EndTangleError):
    """Raised when a monotonicity or duality property fails on a run."""
    pass
