# -*- coding: utf-8 -*-

# stdlib
from dataclasses import dataclass
from dataclasses import field
import json
from typing import Any
from typing import Optional


# ==============================================================================


LINEAR_UNUSED = "linear-unused"
LINEAR_ESCAPES = "linear-escapes"
LEVEL_VIOLATION = "level-violation"
DUALITY_MISMATCH = "duality-mismatch"
TYPE_MISMATCH = "type-mismatch"
UNKNOWN_VARIABLE = "unknown-variable"
UNRESOLVED_SCHEME = "unresolved-scheme"
ILL_FORMED_TYPE = "ill-formed-type"

# parse-time codes; these never come out of the checker
LEXICAL_ERROR = "lexical-error"
SYNTAX_ERROR = "syntax-error"
UNKNOWN_TYPE = "unknown-type"

CHECKER_CODES = (
    LINEAR_UNUSED,
    LINEAR_ESCAPES,
    LEVEL_VIOLATION,
    DUALITY_MISMATCH,
    TYPE_MISMATCH,
    UNKNOWN_VARIABLE,
    UNRESOLVED_SCHEME,
    ILL_FORMED_TYPE,
)

# ANSI
_RED = "\x1b[31m"
_BOLD = "\x1b[1m"
_RESET = "\x1b[0m"


# ------------------------------------------------------------------------------


@dataclass(frozen=True)
class Span:
    """
    1-based line/column of the first character, and of the character after
    the last one. `start`/`end` are offsets into the source text.
    """

    line: int
    column: int
    end_line: int
    end_column: int
    start: int = 0
    end: int = 0

    def merge(self, other: Optional["Span"]) -> "Span":
        if other is None:
            return self
        first, last = (self, other) if self.start <= other.start else (other, self)
        return Span(
            first.line,
            first.column,
            last.end_line,
            last.end_column,
            first.start,
            max(self.end, other.end),
        )

    def shifted(self, lines: int, offset: int) -> "Span":
        return Span(
            self.line + lines,
            self.column,
            self.end_line + lines,
            self.end_column,
            self.start + offset,
            self.end + offset,
        )


UNKNOWN_SPAN = Span(1, 1, 1, 1, 0, 0)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    span: Span
    message: str
    expected: Any = field(default=None, compare=False)
    actual: Any = field(default=None, compare=False)
    declaration: Optional[str] = field(default=None, compare=False)

    def with_declaration(self, name: str) -> "Diagnostic":
        return Diagnostic(
            self.code, self.span, self.message, self.expected, self.actual, name
        )

    def render(self, filename: str = "<input>", color: bool = False) -> str:
        code = self.code
        if color:
            code = _BOLD + _RED + code + _RESET
        return "%s:%d:%d: %s: %s" % (
            filename,
            self.span.line,
            self.span.column,
            code,
            self.message,
        )

    def as_json(self, filename: str = "<input>") -> str:
        from .pretty import pretty  # cycle: pretty -> types -> exceptions

        payload = {
            "file": filename,
            "line": self.span.line,
            "column": self.span.column,
            "end_line": self.span.end_line,
            "end_column": self.span.end_column,
            "code": self.code,
            "message": self.message,
        }
        if self.declaration is not None:
            payload["declaration"] = self.declaration
        if self.expected is not None:
            payload["expected"] = pretty(self.expected)
        if self.actual is not None:
            payload["actual"] = pretty(self.actual)
        return json.dumps(payload, sort_keys=True)


def span_within(span: Span, source: str) -> bool:
    """True if the span lies inside `source`."""
    lines = source.split("\n")
    if not (1 <= span.line <= span.end_line <= len(lines)):
        return False
    if span.column < 1 or span.column > len(lines[span.line - 1]) + 1:
        return False
    if span.end_column < 1 or span.end_column > len(lines[span.end_line - 1]) + 1:
        return False
    return 0 <= span.start <= span.end <= len(source)
