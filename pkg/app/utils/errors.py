"""
Error types shared by the proxima services and the command line
"""

from typing import Optional


class ProximaError(Exception):
    """Base error carrying a stable code and the CLI exit status it maps to."""

    code = "error"
    exit_code = 2

    def __init__(self, message: str, detail: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def __str__(self) -> str:
        if self.detail:
            return f"{self.message} ({self.detail})"
        return self.message


class NotFound(ProximaError):
    """Unknown complex, fixture, probe or map name."""
    code = "not_found"


class InvalidCell(ProximaError):
    """Cell whose vertex list violates the dimension rules."""
    code = "invalid_cell"


class OverlapError(ProximaError):
    """Two cells improperly overlap in the plane."""
    code = "overlap"


class MultiContour(ProximaError):
    """The contour splits into more than one loop."""
    code = "multi_contour"

    def __init__(self, message: str, loops=None):
        super().__init__(message)
        self.loops = loops or []


class NotNested(ProximaError):
    code = "not_nested"


class NotOnCycle(ProximaError):
    code = "not_on_cycle"


class UncoveredCycle(ProximaError):
    code = "uncovered_cycle"


class Mismatch(ProximaError):
    """A representation was built over a different complex."""
    code = "mismatch"


class SpaceMismatch(ProximaError):
    code = "space_mismatch"


class NotTotal(ProximaError):
    """A table map has no entry for the requested complex."""
    code = "not_total"


class ScalarRequired(ProximaError):
    code = "scalar_required"


class EmptyBoundary(ProximaError):
    code = "empty_boundary"


class DocumentError(ProximaError):
    """Base class for .space document errors."""
    code = "document"


class DocumentSyntaxError(DocumentError):
    code = "syntax"

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class DanglingReference(DocumentError):
    code = "dangling_reference"


class DuplicateId(DocumentError):
    code = "duplicate_id"


class InvalidArgument(ProximaError):
    """A precondition on an argument does not hold."""
    code = "invalid_argument"
