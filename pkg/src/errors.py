"""Exception hierarchy shared by the model, protocol and engine packages.

Library code raises these; only the CLI turns them into exit codes.
"""

from typing import Optional


class FirewireError(Exception):
    """Base class for every error raised by this package."""


class LtsError(FirewireError):
    """An Lts value violates its structural invariants."""


class AutParseError(FirewireError):
    """Malformed Aldebaran input. ``line`` is 1-based, ``None`` means end of file."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        where = "end of file" if line is None else f"line {line}"
        super().__init__(f"{where}: {message}")


class SignalDomainError(FirewireError):
    """A partial signal operation was applied outside its domain."""


class ScenarioError(FirewireError):
    """Unknown scenario name or malformed catalog entry."""


class CompositionError(FirewireError):
    """Invalid network construction or permutation."""


class TraceError(FirewireError):
    """A trace cannot be replayed; ``step`` is the 0-based failing position."""

    def __init__(self, message: str, step: int):
        self.step = step
        super().__init__(f"step {step}: {message}")


class UnreachableStateError(FirewireError):
    """Requested state index is not part of the explored graph."""


class FormulaSyntaxError(FirewireError):
    """Formula text could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")
