"""
Exception hierarchy for fockbench.

Divergent norms and transforms are not errors; they are reported through the
status fields of the result objects. Exceptions are reserved for malformed input
and for numerical procedures that could not deliver their contract.
"""

from typing import Optional


class FockbenchError(Exception):
    """Base class for every error raised by fockbench."""


class SymbolSyntaxError(FockbenchError):
    """Expression text does not conform to the symbol grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class CertificateError(FockbenchError):
    """A tail certificate is missing, malformed or violated at a sample circle."""


class ConvergenceError(FockbenchError):
    """Refinement hit its cap before successive estimates agreed."""


class ConfigError(FockbenchError):
    """Invalid run configuration."""

    def __init__(self, message: str, field: str, line: Optional[int] = None):
        where = f"field '{field}'"
        if line is not None:
            where += f", line {line}"
        super().__init__(f"{message} ({where})")
        self.field = field
        self.line = line


class DomainError(FockbenchError, ValueError):
    """Arguments outside the domain of an operation (bad exponent, degenerate psi, ...)."""
