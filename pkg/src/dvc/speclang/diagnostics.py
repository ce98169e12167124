"""Source spans and diagnostics shared by the parser, validator and linter."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List

SEVERITIES = ("error", "warning", "info")


@dataclass(frozen=True, order=True)
class Span:
    line: int = 1
    column: int = 1
    length: int = 0
    offset: int = 0

    def within(self, text: str) -> bool:
        return 0 <= self.offset and self.offset + self.length <= len(text)


NO_SPAN = Span()


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    span: Span
    code: str
    message: str

    def format(self, filename: str = "<input>") -> str:
        return (
            f"{filename}:{self.span.line}:{self.span.column}: "
            f"{self.severity}[{self.code}]: {self.message}"
        )


def error(span: Span, code: str, message: str) -> Diagnostic:
    return Diagnostic("error", span, code, message)


def warning(span: Span, code: str, message: str) -> Diagnostic:
    return Diagnostic("warning", span, code, message)


def info(span: Span, code: str, message: str) -> Diagnostic:
    return Diagnostic("info", span, code, message)


def sort_diagnostics(diags: Iterable[Diagnostic]) -> List[Diagnostic]:
    return sorted(diags, key=lambda d: (d.span.offset, d.span.length, d.code, d.message))


def has_errors(diags: Iterable[Diagnostic]) -> bool:
    return any(d.severity == "error" for d in diags)


class ParseError(Exception):
    """Raised when a DVS document has at least one error diagnostic."""

    def __init__(self, diagnostics: List[Diagnostic]):
        self.diagnostics = sort_diagnostics(diagnostics)
        first = self.diagnostics[0]
        super().__init__(f"{first.span.line}:{first.span.column}: {first.message}")
