"""Exception hierarchy shared across the engine.

Every error a caller can reasonably handle gets its own class; parser errors
carry a character position, compiler errors carry the node path that caused
them.
"""

from __future__ import annotations


class VitaError(Exception):
    """Base class for all errors raised by this package."""


# --- frame / data model ---

class FrameError(VitaError):
    pass


class DuplicateColumnError(FrameError):
    pass


class UnknownColumnError(FrameError):
    pass


class LengthMismatchError(FrameError):
    pass


class TypeMismatchError(FrameError):
    pass


class LoadError(FrameError):
    """CSV could not be loaded; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# --- operator parsing ---

class OperatorSyntaxError(VitaError):
    """Malformed input. ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        hint = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"at offset {position}: {message}{hint}")


class OperatorSchemaError(VitaError):
    """Structurally invalid operator spec. ``path`` locates the offending field."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


# --- compilation ---

class CompileError(VitaError):
    """Base for compile-time failures; ``path`` locates the node that caused it."""

    def __init__(self, message: str, path: str = "$"):
        self.path = path
        super().__init__(f"{path}: {message}")

    def at(self, prefix: str) -> "CompileError":
        """Re-anchor the error under a parent node path."""
        self.path = prefix + self.path.lstrip("$")
        self.args = (f"{self.path}: {self.args[0].split(': ', 1)[-1]}",)
        return self


class UnknownOperatorError(CompileError):
    pass


class PlanTypeError(CompileError):
    def __init__(self, message: str, expected: str = "", found: str = "", path: str = "$"):
        self.expected = expected
        self.found = found
        super().__init__(message, path)


class UnknownViewError(CompileError):
    pass


class ActionIncompatibleError(CompileError):
    pass


class DuplicateNameError(CompileError):
    pass


class MissingParamError(CompileError):
    pass


# --- engine ops ---

class EngineError(VitaError):
    pass


class EmptyVocabularyError(EngineError):
    pass


class EmptyInputError(EngineError):
    pass


class InvalidKError(EngineError):
    pass


class EmptyCorpusError(EngineError):
    pass


class DegenerateInputError(EngineError):
    pass


class UnknownFieldError(EngineError):
    pass


class PredicateError(EngineError):
    pass


class MissingBindingError(EngineError):
    pass


# --- coordination ---

class CoordinationError(VitaError):
    pass


class DuplicateLinkError(CoordinationError):
    pass


class CycleError(CoordinationError):
    pass


# --- versioning / service ---

class UnknownVersionError(VitaError):
    pass


class StorageError(VitaError):
    pass


class UnknownSessionError(VitaError):
    pass


class RangeError(VitaError):
    pass
