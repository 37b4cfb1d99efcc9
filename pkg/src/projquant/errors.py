"""Exception types raised by the engine.

Each class carries the CLI exit code it maps to, so the front end never has
to enumerate them.
"""


class ProjquantError(Exception):
    exit_code = 4


class ValidationError(ProjquantError):
    exit_code = 2


class ParseError(ValidationError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnknownVariable(ParseError):
    pass


class DimensionTooSmall(ValidationError):
    pass


class DegreeZero(ValidationError):
    pass


class DegreeMismatch(ValidationError):
    pass


class CriticalDelta(ProjquantError):
    exit_code = 3

    def __init__(self, pairs):
        self.pairs = tuple(sorted(pairs))
        super().__init__(f"shift is critical at (k, l) = {list(self.pairs)}")


class NoExistenceError(ProjquantError):
    """No natural projectively equivariant quantization exists for these weights."""

    exit_code = 3


class SingularSystem(ProjquantError):
    pass


class InconsistentSystem(ProjquantError):
    pass


class NotFiberConstant(ProjquantError):
    pass


class ConventionViolation(ProjquantError):
    pass
