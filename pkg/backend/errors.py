"""
Exception hierarchy for the reconstruction pipeline
Every error carries the process exit code the CLI reports for it
"""

from typing import Optional


class DarbouxError(Exception):
    """Base class for all pipeline errors"""

    exit_code = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ParseError(DarbouxError):
    """Malformed polynomial text"""

    exit_code = 2

    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class InvalidInputError(DarbouxError):
    exit_code = 2


class VariableMismatchError(InvalidInputError):
    pass


class GenericityError(DarbouxError):
    """Coordinates (or the input itself) are not in general position"""

    exit_code = 2


class NoSolutionError(DarbouxError):
    exit_code = 3


class ResourceLimitError(DarbouxError):
    exit_code = 4


class VerificationError(DarbouxError):
    """All assertions passed but the end-to-end check did not"""

    exit_code = 1


class AssertionFailure(DarbouxError):
    """A wrong-guess assertion of the reconstruction algorithm"""

    label = ""
    line = 0

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class AssertG0Failed(AssertionFailure):
    label = "line14"
    line = 14


class AssertG1Failed(AssertionFailure):
    label = "line15"
    line = 15


class AssertContourFailed(AssertionFailure):
    label = "line19"
    line = 19


class AssertInfinityPlaneFailed(AssertionFailure):
    label = "line24"
    line = 24
