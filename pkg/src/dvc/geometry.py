"""Local-space geometry for visual elements and the outline resampler.

Every shape lives in local coordinates centered on its element's anchor.
Angles for arcs are degrees measured clockwise from 12 o'clock, with the
y axis pointing down (device convention).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

Point = Tuple[float, float]

GEOMETRY_KINDS = (
    "polygon",
    "polyline",
    "circle",
    "arc_sector",
    "rectangle",
    "text_run",
    "icon_path",
)

RESAMPLE_COUNT = 64
TEXT_ADVANCE = 0.6


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Geometry:
    kind: str
    vertices: Tuple[Point, ...] = ()
    radius: float = 0.0
    start: float = 0.0
    end: float = 0.0
    inner: float = 0.0
    width: float = 0.0
    height: float = 0.0
    text: str = ""
    font_size: float = 0.0
    icon: str = ""

    def __post_init__(self) -> None:
        if self.kind not in GEOMETRY_KINDS:
            raise GeometryError(f"unknown geometry kind {self.kind!r}")
        object.__setattr__(
            self, "vertices", tuple((float(x), float(y)) for x, y in self.vertices)
        )
        k = self.kind
        if k in ("polygon", "icon_path") and len(self.vertices) < 3:
            raise GeometryError(f"{k} needs at least 3 vertices")
        if k == "polyline" and len(self.vertices) < 2:
            raise GeometryError("polyline needs at least 2 vertices")
        if k in ("circle", "arc_sector") and not self.radius > 0:
            raise GeometryError(f"{k} needs a positive radius")
        if k == "arc_sector":
            if not self.start < self.end:
                raise GeometryError("arc_sector start angle must be below its end angle")
            if self.end - self.start > 360.0:
                raise GeometryError("arc_sector span exceeds 360 degrees")
            if not 0.0 <= self.inner < 1.0:
                raise GeometryError("arc_sector inner ratio must be in [0, 1)")
        if k == "rectangle" and not (self.width > 0 and self.height > 0):
            raise GeometryError("rectangle needs positive width and height")
        if k == "text_run" and not self.font_size > 0:
            raise GeometryError("text_run needs a positive font size")

    @property
    def closed(self) -> bool:
        return self.kind != "polyline"

    @property
    def span(self) -> float:
        return self.end - self.start


def circle(radius: float) -> Geometry:
    return Geometry("circle", radius=radius)


def rectangle(width: float, height: float) -> Geometry:
    return Geometry("rectangle", width=width, height=height)


def sector(radius: float, start: float, end: float, inner: float = 0.0) -> Geometry:
    return Geometry("arc_sector", radius=radius, start=start, end=end, inner=inner)


def text_run(text: str, font_size: float) -> Geometry:
    return Geometry("text_run", text=text, font_size=font_size)


def polar(radius: float, angle: float) -> Point:
    """Point at `angle` degrees clockwise from 12 o'clock."""
    a = math.radians(angle)
    return (radius * math.sin(a), -radius * math.cos(a))


def text_extent(g: Geometry) -> Tuple[float, float]:
    return (TEXT_ADVANCE * g.font_size * max(len(g.text), 1), g.font_size)


def _arc_points(radius: float, start: float, end: float) -> list:
    steps = max(2, int(math.ceil((end - start) / 2.0)) + 1)
    return [polar(radius, start + (end - start) * i / (steps - 1)) for i in range(steps)]


def native_outline(g: Geometry) -> Tuple[Point, ...]:
    """Dense boundary of the shape; closed outlines do not repeat the first point."""
    k = g.kind
    if k in ("polygon", "polyline", "icon_path"):
        return g.vertices
    if k == "circle":
        return tuple(polar(g.radius, 360.0 * i / 180) for i in range(180))
    if k == "arc_sector":
        outer = _arc_points(g.radius, g.start, g.end)
        if g.inner > 0:
            inner = _arc_points(g.radius * g.inner, g.start, g.end)
            pts = outer + inner[::-1]
        elif g.span >= 360.0:
            pts = outer[:-1]
        else:
            pts = [(0.0, 0.0)] + outer
        return tuple(pts)
    if k == "rectangle":
        w, h = g.width / 2, g.height / 2
        return ((-w, -h), (w, -h), (w, h), (-w, h))
    w, h = text_extent(g)
    return ((-w / 2, -h / 2), (w / 2, -h / 2), (w / 2, h / 2), (-w / 2, h / 2))


def _resample_path(points: Sequence[Point], n: int, closed: bool) -> Tuple[Point, ...]:
    pts = list(points)
    if closed:
        pts = pts + [pts[0]]
    seg = [math.dist(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    total = sum(seg)
    if total == 0:
        return tuple(pts[0] for _ in range(n))
    step = total / n if closed else total / (n - 1)
    out = []
    i, acc = 0, 0.0
    for k in range(n):
        target = k * step
        while i < len(seg) - 1 and acc + seg[i] < target:
            acc += seg[i]
            i += 1
        u = 0.0 if seg[i] == 0 else min(1.0, max(0.0, (target - acc) / seg[i]))
        (x0, y0), (x1, y1) = pts[i], pts[i + 1]
        out.append((x0 + (x1 - x0) * u, y0 + (y1 - y0) * u))
    return tuple(out)


@lru_cache(maxsize=4096)
def resample(g: Geometry, n: int = RESAMPLE_COUNT) -> Tuple[Point, ...]:
    """Boundary resampled to `n` points evenly spaced by arc length."""
    if g.kind == "circle":
        return tuple(polar(g.radius, 360.0 * i / n) for i in range(n))
    return _resample_path(native_outline(g), n, g.closed)


def align_cyclic(src: Sequence[Point], dst: Sequence[Point]) -> Tuple[Point, ...]:
    """Rotate closed `dst` so the total squared distance to `src` is minimal.

    Ties go to the smallest rotation, which keeps the choice deterministic.
    """
    n = len(dst)
    best, best_k = math.inf, 0
    for k in range(n):
        cost = 0.0
        for i in range(n):
            sx, sy = src[i]
            dx, dy = dst[(i + k) % n]
            cost += (sx - dx) ** 2 + (sy - dy) ** 2
        if cost < best - 1e-12:
            best, best_k = cost, k
    return tuple(dst[(i + best_k) % n] for i in range(n))


@lru_cache(maxsize=4096)
def bounding_radius(g: Geometry) -> float:
    if g.kind == "circle":
        return g.radius
    if g.kind == "arc_sector":
        return g.radius
    return max(math.hypot(x, y) for x, y in native_outline(g))


def max_deviation(a: Geometry, b: Geometry) -> float:
    pa, pb = resample(a), resample(b)
    return max(math.dist(p, q) for p, q in zip(pa, pb))


def transform(
    points: Sequence[Point], scale: float, rotation: float, offset: Point
) -> list:
    """Scale, rotate clockwise by `rotation` degrees, then translate."""
    c, s = math.cos(math.radians(rotation)), math.sin(math.radians(rotation))
    ox, oy = offset
    return [
        (ox + scale * (x * c - y * s), oy + scale * (x * s + y * c)) for x, y in points
    ]
