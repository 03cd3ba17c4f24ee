"""Exception types shared across the toolkit."""


class TsdError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(TsdError):
    """Input document is not well formed JSON."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class SchemaError(TsdError):
    """JSON is well formed but does not match the event graph schema."""

    def __init__(self, message, field=""):
        super().__init__(message)
        self.field = field


class GraphValidationError(TsdError):
    """An operation was handed an event graph that fails validation."""

    def __init__(self, report):
        rules = sorted({v.rule for v in report.violations})
        super().__init__("event graph is invalid: " + ", ".join(rules))
        self.report = report


class NotNormalizedError(TsdError):
    """An operation that requires a normalized event graph got a raw one."""


class OrderError(TsdError):
    """A location order is not a bijection onto the expected level range."""


class DecompositionError(TsdError):
    """A tree decomposition fails its invariants for the given graph."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class CapExceededError(TsdError):
    """Brute force was asked to enumerate more locations than its cap allows."""


class CyclicOrderError(TsdError):
    """A pair-variable assignment induces a cyclic tournament."""

    def __init__(self, message, cycle=None):
        super().__init__(message)
        self.cycle = cycle


class InfeasibleError(TsdError):
    """The integer program has no feasible assignment."""


class TimeLimitExceeded(TsdError):
    """A solver hit its wall-clock limit before proving optimality."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class LiftError(TsdError):
    """A reduced-order lift was given an order or report it cannot apply."""


class CrossCheckError(TsdError):
    """Benchmark methods disagreed on an optimal value."""
