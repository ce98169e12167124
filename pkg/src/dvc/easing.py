"""Easing curves on [0, 1]. All are monotone with f(0) = 0 and f(1) = 1."""
from __future__ import annotations

from typing import Callable, Dict


def linear(u: float) -> float:
    return u


def ease_in_out(u: float) -> float:
    # cubic smoothstep
    return u * u * (3.0 - 2.0 * u)


def ease_in(u: float) -> float:
    return u * u * u


def ease_out(u: float) -> float:
    v = 1.0 - u
    return 1.0 - v * v * v


EASING_FUNCTIONS: Dict[str, Callable[[float], float]] = {
    "linear": linear,
    "ease_in_out": ease_in_out,
    "ease_in": ease_in,
    "ease_out": ease_out,
}


def ease(name: str, u: float) -> float:
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    return EASING_FUNCTIONS[name](u)
