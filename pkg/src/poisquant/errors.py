"""Exception types shared across the package."""

from __future__ import annotations


class AlgebraError(ValueError):
    """Base class for mathematical precondition violations."""


class ArityMismatchError(AlgebraError):
    """Two operands live in rings (or have slot counts) that do not match."""

    def __init__(self, left: int, right: int, context: str = ""):
        self.left = left
        self.right = right
        where = f" in {context}" if context else ""
        super().__init__(f"arity mismatch{where}: {left} vs {right}")


class ParseError(ValueError):
    """Text input rejected; carries 1-based line and column positions."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")
