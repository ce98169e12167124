"""Sample timelines, apply the camera and emit deterministic SVG frames."""
from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, replace
from decimal import ROUND_HALF_UP, Decimal
from typing import Dict, List, Optional, Sequence, Tuple

from .compiler import Timeline, plan_video
from .geometry import native_outline, polar, transform
from .model import CameraPose, Scene, VisualElement
from .speclang.document import VideoSpec

REFERENCE_EXTENT = 1000.0
BLUR_PER_LAYER = 4.0
STROKE_WIDTH = 2.0
FONT_FAMILY = "sans-serif"


class SamplingError(ValueError):
    code = "sampling-error"


# ---------------------------------------------------------------- sampling


def _round_color(c) -> Tuple[int, int, int]:
    # half away from zero; channels are nonnegative
    return tuple(min(255, max(0, int(math.floor(v + 0.5)))) for v in c)


def _element_at(actor, t: float) -> VisualElement:
    if t >= 1.0 and actor.final is not None:
        return actor.final
    base = actor.base
    if not actor.tracks:
        return base
    changes = {}
    clip = None
    for tr in actor.tracks:
        v = tr.value_at(t)
        if tr.channel == "clip":
            clip = None if v == (0.0, 0.0, 1.0, 1.0) else tuple(v)
        elif tr.channel == "color":
            changes["color"] = _round_color(v)
        elif tr.channel == "opacity":
            changes["opacity"] = min(1.0, max(0.0, v))
        elif tr.channel == "size":
            changes["size"] = max(0.0, v)
        else:
            changes[tr.channel] = v
    el = base.with_vars(**changes) if changes else base
    if clip is not None:
        el = replace(el, clip=clip)
    return el


def sample(timeline: Timeline, t: float) -> Scene:
    """The scene shown at normalized time `t` of the clip."""
    if not 0.0 <= t <= 1.0 or math.isnan(t):
        raise SamplingError(f"sample time {t} outside [0, 1]")
    a, b = timeline.source, timeline.target
    if timeline.interstitial is not None:
        scene, lo, hi = timeline.interstitial
        if lo <= t <= hi:
            return scene
    early = t < 0.5
    live = [act for act in timeline.actors if act.window.contains(t)]

    def order(act):
        if early:
            return (0, act.src_index) if act.src_index is not None else (1, act.tgt_index)
        return (0, act.src_index) if act.tgt_index is None else (1, act.tgt_index)

    live.sort(key=order)
    if 0.0 < t < 1.0:
        live.sort(key=lambda act: act.on_top)
    elements: List[VisualElement] = []
    used = set()
    for act in live:
        el = _element_at(act, t)
        if el.id in used:
            el = replace(el, id=f"{el.id}~{act.role}")
        used.add(el.id)
        elements.append(el)
    ref = a if early else b
    return Scene(ref.id, tuple(elements), timeline.camera_at(t), ref.clip_form, ref.vis_type)


# ---------------------------------------------------------------- camera


@dataclass(frozen=True)
class DeviceElement:
    element: VisualElement
    scale: float  # device pixels per local shape unit
    anchor: Tuple[float, float]  # device position of the element origin
    blur: float


@dataclass(frozen=True)
class DeviceScene:
    width: int
    height: int
    background: Tuple[int, int, int]
    elements: Tuple[DeviceElement, ...]


def apply_camera(
    scene: Scene,
    pose: CameraPose,
    viewport: Tuple[int, int],
    background: Tuple[int, int, int] = (255, 255, 255),
) -> DeviceScene:
    w, h = viewport
    k = pose.zoom * min(w, h) / REFERENCE_EXTENT
    cx, cy = pose.center
    out = []
    for el in scene.elements:
        v = el.variables
        anchor = ((v.position[0] - cx) * k + w / 2, (v.position[1] - cy) * k + h / 2)
        blur = BLUR_PER_LAYER * abs(v.depth - pose.focus_depth)
        out.append(DeviceElement(el, v.size * k, anchor, blur))
    return DeviceScene(w, h, tuple(background), tuple(out))


# ---------------------------------------------------------------- SVG


def num(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _hex(c) -> str:
    return "#%02X%02X%02X" % tuple(c)


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def _pt(p) -> str:
    return f"{num(p[0])} {num(p[1])}"


def _sector_path(de: DeviceElement) -> str:
    g, v = de.element.variables.shape, de.element.variables
    rot = v.orientation
    r = g.radius * de.scale
    ax, ay = de.anchor

    def at(radius, angle):
        x, y = polar(radius, angle + rot)
        return (ax + x, ay + y)

    def arc(radius, a0, a1, sweep):
        # one arc command per half turn at most, so full circles draw correctly
        parts, steps = [], max(1, int(math.ceil((a1 - a0) / 180.0 - 1e-9)))
        for i in range(steps):
            lo = a0 + (a1 - a0) * i / steps
            hi = a0 + (a1 - a0) * (i + 1) / steps
            if not sweep:
                lo, hi = a1 - (a1 - a0) * i / steps, a1 - (a1 - a0) * (i + 1) / steps
            large = 1 if abs(hi - lo) > 180.0 else 0
            parts.append(f"A {num(radius)} {num(radius)} 0 {large} {1 if sweep else 0} {_pt(at(radius, hi))}")
        return parts

    full = g.span >= 360.0
    if g.inner > 0:
        ri = r * g.inner
        cmds = [f"M {_pt(at(r, g.start))}"] + arc(r, g.start, g.end, True)
        if full:
            cmds += ["Z", f"M {_pt(at(ri, g.end))}"]
        else:
            cmds.append(f"L {_pt(at(ri, g.end))}")
        cmds += arc(ri, g.start, g.end, False) + ["Z"]
        return " ".join(cmds)
    if full:
        return " ".join([f"M {_pt(at(r, g.start))}"] + arc(r, g.start, g.end, True) + ["Z"])
    return " ".join([f"M {_pt((ax, ay))}", f"L {_pt(at(r, g.start))}"] +
                    arc(r, g.start, g.end, True) + ["Z"])


def _shape_svg(de: DeviceElement) -> str:
    el = de.element
    v = el.variables
    g = v.shape
    fill = _hex(v.color)
    op = "" if v.opacity == 1.0 else f' opacity="{num(v.opacity)}"'
    ax, ay = de.anchor
    if g.kind == "circle":
        return f'<circle cx="{num(ax)}" cy="{num(ay)}" r="{num(g.radius * de.scale)}" fill="{fill}"{op}/>'
    if g.kind == "text_run":
        rot = f' transform="rotate({num(v.orientation)} {num(ax)} {num(ay)})"' if v.orientation else ""
        return (f'<text x="{num(ax)}" y="{num(ay)}" font-family="{FONT_FAMILY}" '
                f'font-size="{num(g.font_size * de.scale)}" text-anchor="middle" '
                f'dominant-baseline="central" fill="{fill}"{op}{rot}>{_escape(g.text)}</text>')
    if g.kind == "arc_sector":
        return f'<path d="{_sector_path(de)}" fill="{fill}"{op}/>'
    pts = transform(native_outline(g), de.scale, v.orientation, de.anchor)
    d = "M " + " L ".join(_pt(p) for p in pts)
    if g.closed:
        return f'<path d="{d} Z" fill="{fill}"{op}/>'
    return (f'<path d="{d}" fill="none" stroke="{fill}" '
            f'stroke-width="{num(STROKE_WIDTH)}"{op}/>')


def render_frame(ds: DeviceScene) -> str:
    """SVG text for a device-space scene; equal input gives equal bytes."""
    filters: Dict[str, str] = {}
    clips: Dict[Tuple[float, ...], str] = {}
    body = []
    for de in ds.elements:
        if de.element.variables.opacity <= 0.0:
            continue
        frag = _shape_svg(de)
        attrs = ""
        if de.blur > 0:
            key = num(de.blur)
            filters.setdefault(key, f"blur{len(filters)}")
            attrs += f' filter="url(#{filters[key]})"'
        if de.element.clip is not None:
            rect = de.element.clip
            clips.setdefault(rect, f"clip{len(clips)}")
            attrs += f' clip-path="url(#{clips[rect]})"'
        body.append(f"<g{attrs}>{frag}</g>" if attrs else frag)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{ds.width}" '
        f'height="{ds.height}" viewBox="0 0 {ds.width} {ds.height}">',
    ]
    if filters or clips:
        out.append("<defs>")
        for key, fid in filters.items():
            out.append(f'<filter id="{fid}" x="-50%" y="-50%" width="200%" height="200%">'
                       f'<feGaussianBlur stdDeviation="{key}"/></filter>')
        for (x0, y0, x1, y1), cid in clips.items():
            out.append(f'<clipPath id="{cid}"><rect x="{num(x0 * ds.width)}" y="{num(y0 * ds.height)}" '
                       f'width="{num((x1 - x0) * ds.width)}" height="{num((y1 - y0) * ds.height)}"/>'
                       f"</clipPath>")
        out.append("</defs>")
    out.append(f'<rect x="0" y="0" width="{ds.width}" height="{ds.height}" fill="{_hex(ds.background)}"/>')
    out += body
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_scene(scene: Scene, viewport: Tuple[int, int],
                 background: Tuple[int, int, int] = (255, 255, 255)) -> str:
    """Standalone render of one scene through its own camera."""
    return render_frame(apply_camera(scene, scene.camera, viewport, background))


def render_at(timeline: Timeline, t: float, viewport: Tuple[int, int],
              background: Tuple[int, int, int] = (255, 255, 255)) -> str:
    s = sample(timeline, t)
    return render_frame(apply_camera(s, s.camera, viewport, background))


# ---------------------------------------------------------------- video


def frame_count(duration: float, fps: int) -> int:
    n = int((Decimal(repr(duration)) * fps).to_integral_value(rounding=ROUND_HALF_UP))
    return max(1, n)


@dataclass(frozen=True)
class ClipRange:
    source: str
    target: str
    first_frame: int
    last_frame: int
    transitions: Tuple[str, ...]


@dataclass(frozen=True)
class FrameSet:
    files: Tuple[str, ...]
    fps: int
    width: int
    height: int
    clips: Tuple[ClipRange, ...]


def frame_name(i: int) -> str:
    return f"frame_{i:05d}.svg"


def frame_plan(spec: VideoSpec, timelines: Sequence[Timeline]):
    """(timeline index, t) for every emitted frame plus the per-clip ranges."""
    frames: List[Tuple[int, float]] = []
    ranges: List[ClipRange] = []
    for ci, (clip, tl) in enumerate(zip(spec.clips, timelines)):
        n = frame_count(tl.duration, spec.fps)
        shared = ci > 0 and not clip.new_segment
        first = len(frames) - 1 if shared else len(frames)
        for k in range(1 if shared else 0, n + 1):
            frames.append((ci, k / n))
        ranges.append(ClipRange(clip.source, clip.target, first, len(frames) - 1,
                                tuple(t.type.name for t in clip.transitions)))
    return frames, ranges


def spec_digest(spec: VideoSpec) -> str:
    from .speclang.printer import print_spec

    return hashlib.sha256(print_spec(spec).encode("utf-8")).hexdigest()


def render_video(spec: VideoSpec, out_dir: str) -> FrameSet:
    """Write every frame plus manifest.json into `out_dir`."""
    timelines = plan_video(spec)
    frames, ranges = frame_plan(spec, timelines)
    viewport = (spec.width, spec.height)
    os.makedirs(out_dir, exist_ok=True)
    names = []
    for i, (ci, t) in enumerate(frames):
        name = frame_name(i)
        text = render_at(timelines[ci], t, viewport, spec.background)
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        names.append(name)
    manifest = {
        "fps": spec.fps,
        "width": spec.width,
        "height": spec.height,
        "clips": [
            {"from": r.source, "to": r.target, "first_frame": r.first_frame,
             "last_frame": r.last_frame, "transitions": list(r.transitions)}
            for r in ranges
        ],
        "spec_sha256": spec_digest(spec),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return FrameSet(tuple(names), spec.fps, spec.width, spec.height, tuple(ranges))
