"""Canonical DVS printer: alphabetized attributes, 2-space indent, LF endings."""
from __future__ import annotations

from decimal import Decimal
from typing import List, Tuple

from ..model import CameraPose, Scene, VisualElement
from .document import DEFAULT_DURATION, DEFAULT_EASING, ClipSpec, TransitionEntry, VideoSpec
from .parser import DEFAULT_FONT

INDENT = "  "


def fmt_number(x: float) -> str:
    """Shortest round-trip decimal, never in exponent form."""
    x = float(x)
    if x == 0:
        return "0"
    text = format(Decimal(repr(x)), "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


def fmt_string(s: str) -> str:
    body = s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    return f'"{body}"'


def fmt_color(c) -> str:
    return "#%02X%02X%02X" % tuple(c)


def fmt_tuple(values) -> str:
    return "(" + ", ".join(fmt_number(v) for v in values) + ")"


def fmt_value(v) -> str:
    if isinstance(v, bool):
        raise TypeError("booleans have no DVS form")
    if isinstance(v, (int, float)):
        return fmt_number(v)
    if isinstance(v, str):
        return v
    if isinstance(v, tuple) and v and all(isinstance(c, tuple) and len(c) == 3 and
                                          all(isinstance(x, int) for x in c) for c in v):
        return "[" + " ".join(fmt_color(c) for c in v) + "]"
    raise TypeError(f"cannot print value {v!r}")


def _attrs(pairs: List[Tuple[str, str]]) -> str:
    return "".join(f" {k}={v}" for k, v in sorted(pairs))


def _shape_attrs(g) -> List[Tuple[str, str]]:
    out = [("shape", g.kind)]
    k = g.kind
    if k == "circle":
        out.append(("r", fmt_number(g.radius)))
    elif k == "rectangle":
        out += [("w", fmt_number(g.width)), ("h", fmt_number(g.height))]
    elif k == "arc_sector":
        out += [("r", fmt_number(g.radius)), ("start", fmt_number(g.start)),
                ("end", fmt_number(g.end))]
        if g.inner:
            out.append(("inner", fmt_number(g.inner)))
    elif k == "text_run":
        out.append(("text", fmt_string(g.text)))
        if g.font_size != DEFAULT_FONT:
            out.append(("font", fmt_number(g.font_size)))
    elif k == "icon_path" and g.icon:
        out.append(("icon", g.icon))
    else:
        out.append(("points", "[" + " ".join(fmt_tuple(p) for p in g.vertices) + "]"))
    return out


def print_element(el: VisualElement) -> str:
    v = el.variables
    pairs = _shape_attrs(v.shape)
    if v.position != (0.0, 0.0):
        pairs.append(("at", fmt_tuple(v.position)))
    if v.size != 1.0:
        pairs.append(("size", fmt_number(v.size)))
    if v.color != (0, 0, 0):
        pairs.append(("color", fmt_color(v.color)))
    if v.orientation != 0.0:
        pairs.append(("rot", fmt_number(v.orientation)))
    if v.opacity != 1.0:
        pairs.append(("opacity", fmt_number(v.opacity)))
    if v.depth != 0:
        pairs.append(("depth", str(v.depth)))
    if el.data_binding is not None:
        pairs.append(("bind", ".".join(el.data_binding)))
    return f"{el.kind} {el.id}{_attrs(pairs)}"


def print_chart(decl) -> str:
    pairs = [("data", decl.dataset)]
    if decl.at != (0.0, 0.0):
        pairs.append(("at", fmt_tuple(decl.at)))
    if decl.extent != (400.0, 300.0):
        pairs.append(("extent", fmt_tuple(decl.extent)))
    pairs += [(k, fmt_value(v)) for k, v in decl.options]
    return f"chart {decl.vis_type} {decl.id}{_attrs(pairs)}"


def print_scene(s: Scene) -> List[str]:
    pairs = []
    if s.camera != CameraPose():
        c = s.camera
        pairs.append(("camera", fmt_tuple((*c.center, c.zoom, c.focus_depth))))
    if s.clip_form != "visualization":
        pairs.append(("form", s.clip_form))
    if s.vis_type is not None:
        pairs.append(("vis", s.vis_type))
    lines = [f"scene {s.id}{_attrs(pairs)} {{"]
    for k in range(len(s.elements) + 1):
        for slot, decl in s.charts:
            if slot == k:
                lines.append(INDENT + print_chart(decl))
        if k < len(s.elements):
            lines.append(INDENT + print_element(s.elements[k]))
    lines.append("}")
    return lines


def print_transition(t: TransitionEntry) -> str:
    pairs = [(k, fmt_value(v)) for k, v in t.params]
    if t.duration != DEFAULT_DURATION:
        pairs.append(("duration", fmt_number(t.duration)))
    if t.easing != DEFAULT_EASING:
        pairs.append(("easing", t.easing))
    return f"transition {t.type.name}{_attrs(pairs)}"


def print_clip(c: ClipSpec) -> List[str]:
    rel = f" relation={c.relation}" if c.relation is not None else ""
    lines = [f"clip {c.source} -> {c.target}{rel} {{"]
    lines += [INDENT + print_transition(t) for t in c.transitions]
    for sources, targets in c.maps:
        lines.append(f"{INDENT}map {', '.join(sources)} -> {', '.join(targets)}")
    if c.halftime_scene is not None:
        lines.append(f"{INDENT}halftime {c.halftime_scene}")
    if c.camera_path:
        keys = " ".join(
            fmt_tuple((*p.center, p.zoom, p.focus_depth)) + "@" + fmt_number(t)
            for t, p in c.camera_path
        )
        lines.append(f"{INDENT}camera {keys}")
    lines.append("}")
    return lines


def _row(row) -> str:
    cells = []
    for k, v in row:
        cells.append(f"{k}={fmt_string(v) if isinstance(v, str) else fmt_number(v)}")
    return "(" + " ".join(cells) + ")"


def print_spec(spec: VideoSpec) -> str:
    head = [("background", fmt_color(spec.background)), ("fps", str(spec.fps)),
            ("height", str(spec.height)), ("width", str(spec.width))]
    lines = [f"video {fmt_string(spec.title)}{_attrs(head)}"]
    for d in spec.datasets:
        lines.append("")
        lines.append(f"data {d.id} {{")
        lines += [INDENT + _row(r) for r in d.rows]
        lines.append("}")
    for s in spec.scenes:
        lines.append("")
        lines += print_scene(s)
    if spec.clips:
        lines.append("")
    for c in spec.clips:
        if c.new_segment:
            lines.append("segment")
        lines += print_clip(c)
    return "\n".join(lines) + "\n"
