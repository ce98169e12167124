"""DVS text format: parse, print and validate video scripts."""
from .diagnostics import Diagnostic, ParseError, Span
from .document import ClipSpec, TransitionEntry, VideoSpec
from .parser import parse, parse_with_diagnostics
from .printer import print_spec
from .validate import expanded_scenes, validate

__all__ = [
    "ClipSpec",
    "Diagnostic",
    "ParseError",
    "Span",
    "TransitionEntry",
    "VideoSpec",
    "expanded_scenes",
    "parse",
    "parse_with_diagnostics",
    "print_spec",
    "validate",
]
