from __future__ import annotations


class LforgeError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class FormulaSyntaxError(LforgeError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnboundVariableError(LforgeError):
    pass


class CaptureError(LforgeError):
    pass


class SlotError(LforgeError):
    pass


class ClassificationError(LforgeError):
    pass


class PreconditionError(LforgeError):
    pass


class NormalizationRefused(LforgeError):
    pass


class ResourceLimitError(LforgeError):
    pass


class NotInLevelError(LforgeError):
    pass


class NonTransitiveDomainError(LforgeError):
    pass


class NotEvaluableError(LforgeError):
    """Raised for syntax-only atoms (provability templates) during evaluation."""


class ValueEscapesLevelError(LforgeError):
    pass


class AssemblyError(LforgeError):
    pass
