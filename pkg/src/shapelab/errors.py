"""Diagnostics and error types shared across stages.

Every user-facing failure is carried as a Diagnostic record
{severity, line, column, message, hint}; exceptions here are the
transport for errors raised during lexing, evaluation, or session use.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Diagnostic:
    severity: str  # "error" | "warning"
    line: int
    column: int
    message: str
    hint: str = ""

    def to_json(self) -> dict:
        return {
            "severity": self.severity,
            "line": self.line,
            "column": self.column,
            "message": self.message,
            "hint": self.hint,
        }

    def render(self) -> str:
        text = f"{self.line}:{self.column}: {self.severity}: {self.message}"
        if self.hint:
            text += f" Hint: {self.hint}"
        return text


class ShapelabError(Exception):
    """Base for all errors raised while processing a program."""

    def diagnostic(self) -> Diagnostic:
        raise NotImplementedError


@dataclass
class LexError(ShapelabError):
    message: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"

    def diagnostic(self) -> Diagnostic:
        return Diagnostic("error", self.line, self.column, self.message)


@dataclass
class ParseError(ShapelabError):
    message: str
    line: int
    column: int
    expected: list[str] = field(default_factory=list)

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"

    def diagnostic(self) -> Diagnostic:
        return Diagnostic("error", self.line, self.column, self.message)


class EvalError(ShapelabError):
    """Base for runtime errors; all carry a source position when known."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def diagnostic(self) -> Diagnostic:
        return Diagnostic("error", self.line, self.column, self.message)


class DivideByZero(EvalError):
    def __init__(self, line: int = 0, column: int = 0):
        super().__init__("Cannot divide by zero.", line, column)


class CyclicDefinition(EvalError):
    def __init__(self, name: str, line: int = 0, column: int = 0):
        super().__init__(f"The definition of {name} depends on itself.", line, column)


class RecursionLimit(EvalError):
    def __init__(self, line: int = 0, column: int = 0):
        super().__init__("This program recursed more than 10000 calls deep.", line, column)


class BudgetExceeded(EvalError):
    def __init__(self, kind: str):
        message = "This program is too slow." if kind == "slow" else "This program is too large."
        super().__init__(message)
        self.kind = kind


class Singular(ShapelabError):
    """A transform with near-zero determinant cannot be inverted."""


class UnknownColor(ShapelabError):
    def __init__(self, name: str, suggestions: list[str]):
        super().__init__(name)
        self.name = name
        self.suggestions = suggestions

    def __str__(self) -> str:
        options = ", ".join(self.suggestions)
        return f"Unknown color {self.name!r}. Did you mean one of: {options}?"


class TickOnNonGameApp(ShapelabError):
    def __str__(self) -> str:
        return "Only gameApp programs receive tick events."


class BadRange(ShapelabError):
    pass


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance, used for 'did you mean' suggestions."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def closest_names(name: str, candidates: list[str], count: int = 3) -> list[str]:
    ranked = sorted(candidates, key=lambda c: (edit_distance(name, c), c))
    return ranked[:count]
