"""Tokenizer for Data Video Script (.dvs) text."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Tuple

from .diagnostics import Diagnostic, Span, error

IDENT, NUMBER, STRING, COLOR, PUNCT, NEWLINE, EOF = (
    "ident", "number", "string", "color", "punct", "newline", "eof",
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<newline>\r\n|\n|\r)
  | (?P<color>\#[0-9A-Fa-f]{6}(?![0-9A-Za-z_]))
  | (?P<comment>\#[^\r\n]*)
  | (?P<number>-?[0-9]+(?:\.[0-9]+)?(?![0-9A-Za-z_.]))
  | (?P<ident>[a-z][a-z0-9_]*(?![A-Za-z0-9_]))
  | (?P<string>"(?:[^"\\\r\n]|\\.)*")
  | (?P<punct>->|[{}()\[\]=,;@.])
    """,
    re.VERBOSE,
)

_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span
    value: object = None


def unescape(body: str) -> str:
    out, i = [], 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            out.append(_ESCAPES.get(body[i + 1], body[i + 1]))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def tokenize(source: str) -> Tuple[List[Token], List[Diagnostic]]:
    tokens: List[Token] = []
    diags: List[Diagnostic] = []
    line, line_start, pos = 1, 0, 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            # swallow the bad run up to the next space so one typo is one error
            end = pos + 1
            while end < n and not source[end].isspace():
                end += 1
            span = Span(line, col, end - pos, pos)
            diags.append(error(span, "lex-error", f"unexpected text {source[pos:end]!r}"))
            pos = end
            continue
        kind, text = m.lastgroup, m.group()
        span = Span(line, col, len(text), pos)
        if kind == "newline":
            tokens.append(Token(NEWLINE, text, span))
            line += 1
            line_start = m.end()
        elif kind == "number":
            tokens.append(Token(NUMBER, text, span, float(text)))
        elif kind == "string":
            tokens.append(Token(STRING, text, span, unescape(text[1:-1])))
        elif kind == "color":
            h = text[1:]
            rgb = (int(h[0:2], 16), int(h[2:4], 16), int(h[4:6], 16))
            tokens.append(Token(COLOR, text, span, rgb))
        elif kind in ("ident", "punct"):
            tokens.append(Token(kind, text, span, text))
        pos = m.end()
    tokens.append(Token(EOF, "", Span(line, pos - line_start + 1, 0, n)))
    return tokens, diags
