"""Exception types raised across the package."""


class DrrError(Exception):
    """Base class for all errors raised by drrquanta."""


class ValidationError(DrrError, ValueError):
    """A scenario violates one of the model invariants."""


class NonPositiveParameter(ValidationError):
    def __init__(self, field, value):
        self.field = field
        self.value = value
        super().__init__(f"{field} must be positive, got {value!r}")


class TooFewFlows(ValidationError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"at least 2 flows are required, got {n}")


class DeadlineUnachievable(ValidationError):
    def __init__(self, index, work, demand, what="c*d"):
        self.index = index
        self.work = work
        self.demand = demand
        super().__init__(
            f"flow {index}: {what} = {work!r} must exceed b + L = {demand!r}"
        )


class ResidualDeficitTooSmall(ValidationError):
    def __init__(self, cap, max_packet):
        self.cap = cap
        self.max_packet = max_packet
        super().__init__(
            f"residual deficit cap L = {cap!r} is below the largest packet "
            f"length {max_packet!r}"
        )


class SameFlow(DrrError, ValueError):
    def __init__(self, i):
        super().__init__(f"interference term needs two distinct flows, got i = j = {i}")


class NoConvergence(DrrError, RuntimeError):
    """An iterative solver hit its iteration cap."""


class InfeasibleSystem(DrrError):
    """No positive quanta vector meets every deadline."""


class NotTwoFlows(DrrError, ValueError):
    pass


class QuantumUnderflow(DrrError, ValueError):
    pass


class ParseError(DrrError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class SchemaError(DrrError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class GridTooLarge(DrrError, ValueError):
    pass
