"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ElimError(Exception):
    """Base class for all library errors."""


class GraphSyntaxError(ElimError):
    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class CycleDetected(ElimError):
    pass


class IsolatedVertex(ElimError):
    pass


class NotInternal(ElimError):
    pass


class NotPresent(ElimError):
    pass


class EliminationFailed(ElimError):
    """A step of a sequence could not be applied; ``index`` is its position."""

    def __init__(self, index: int, cause: ElimError) -> None:
        super().__init__(f"step {index}: {cause}")
        self.index = index
        self.cause = cause


class NotSeparable(ElimError):
    pass


class InvalidSeparator(ElimError):
    pass


class Overflow(ElimError):
    pass


class InvalidParams(ElimError):
    pass


class TooLarge(ElimError):
    pass


class NonIntegral(ElimError):
    pass


class InconsistentOrder(ElimError):
    pass


class ReplayMismatch(ElimError):
    pass


class ConfigError(ElimError):
    pass
