"""
Exception hierarchy

Every error carries the exit code the CLI returns for it: 1 for domain
failures, 2 for usage and parse problems.
"""
from typing import Optional


class LpSolveError(Exception):
    """Base class for library errors"""

    exit_code: int = 1

    def __init__(self, message: str, operation: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.operation = operation

    def diagnostic(self) -> str:
        """One-line diagnostic for stderr"""
        if self.operation:
            return f"{self.operation}: {self.message}"
        return self.message


class ShapeError(LpSolveError, ValueError):
    """Operand dimensions do not fit the operation"""


class DomainError(LpSolveError, ValueError):
    """Argument outside the operation's domain"""


class SingularityError(LpSolveError):
    """A matrix that must be inverted is singular"""


class IndependenceError(SingularityError):
    """Experiment inputs are not linearly independent"""


class DecompositionError(LpSolveError):
    """A factorization failed to converge"""


class NotAFrameError(LpSolveError):
    """Vectors do not span the space"""

    def __init__(self, message: str, lower: float = 0.0, operation: Optional[str] = None):
        super().__init__(message, operation)
        self.lower = lower


class RecoveryError(LpSolveError):
    """Sparse spectrum or band-limited reconstruction failed"""


class SpecError(LpSolveError, IndexError):
    """Invalid partition index specification"""


class ParseError(LpSolveError):
    """Malformed input file"""

    exit_code = 2

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        location = path or "<input>"
        if line is not None:
            location = f"{location}, line {line}"
        super().__init__(f"{message} ({location})", operation="parse")
        self.path = path
        self.line = line


class UsageError(LpSolveError):
    """Missing or inconsistent command-line arguments"""

    exit_code = 2
