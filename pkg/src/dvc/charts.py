"""Chart layout: expand chart declarations over dataset rows into elements."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .geometry import Geometry, Point, circle, rectangle, sector, text_run
from .model import VisualElement, VisualVariables, Scene

Scalar = Union[float, str]
Row = Tuple[Tuple[str, Scalar], ...]

PALETTE = (
    (0x4E, 0x79, 0xA7),
    (0xF2, 0x8E, 0x2B),
    (0xE1, 0x57, 0x59),
    (0x76, 0xB7, 0xB2),
    (0x59, 0xA1, 0x4F),
    (0xED, 0xC9, 0x48),
    (0xB0, 0x7A, 0xA1),
    (0xFF, 0x9D, 0xA7),
    (0x9C, 0x75, 0x5F),
    (0xBA, 0xB0, 0xAC),
)
INK = (0x33, 0x33, 0x33)
LAND = (0xD0, 0xD0, 0xD0)
LABEL_FONT = 14.0

# option name -> "field" (a dataset field name), "number", "ident", "colors"
CHART_OPTIONS = {
    "category": "field",
    "value": "field",
    "x": "field",
    "y": "field",
    "label": "field",
    "from": "field",
    "to": "field",
    "icon": "ident",
    "unit": "number",
    "ref": "number",
    "radius": "number",
    "inner": "number",
    "palette": "colors",
}

REQUIRED_ROLES = {
    "pie": ("category", "value"),
    "donut": ("category", "value"),
    "bar_chart": ("category", "value"),
    "proportional_area": ("category", "value"),
    "pictograph": ("category", "value"),
    "number_icon_text": ("category", "value"),
    "map": ("category",),
    "line_chart": ("x", "y"),
    "scatter_plot": ("x", "y"),
    "diagram": ("from", "to"),
}


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class Dataset:
    id: str
    rows: Tuple[Row, ...] = ()

    def records(self) -> List[Dict[str, Scalar]]:
        return [dict(r) for r in self.rows]


@dataclass(frozen=True)
class ChartDecl:
    vis_type: str
    id: str
    dataset: str
    at: Point = (0.0, 0.0)
    extent: Point = (400.0, 300.0)
    options: Tuple[Tuple[str, object], ...] = ()

    def option(self, name: str, default=None):
        for k, v in self.options:
            if k == name:
                return v
        return default


# ---------------------------------------------------------------- assets


def _parse_asset(text: str) -> Dict[str, Tuple[Point, ...]]:
    from .speclang.lexer import NEWLINE, EOF, tokenize

    tokens, diags = tokenize(text)
    if diags:
        raise LayoutError(f"bad asset file: {diags[0].message}")
    out: Dict[str, Tuple[Point, ...]] = {}
    line: list = []
    for tok in tokens:
        if tok.kind in (NEWLINE, EOF):
            if line:
                name = line[1].text
                nums = [t.value for t in line if t.kind == "number"]
                out[name] = tuple(zip(nums[0::2], nums[1::2]))
                line = []
            continue
        line.append(tok)
    return out


@lru_cache(maxsize=None)
def load_asset(name: str) -> Dict[str, Tuple[Point, ...]]:
    text = resources.files("dvc").joinpath("assets", name).read_text(encoding="utf-8")
    return _parse_asset(text)


def icon_geometry(name: str) -> Geometry:
    icons = load_asset("icons.dvs")
    if name not in icons:
        raise LayoutError(f"unknown icon {name!r}")
    return Geometry("icon_path", vertices=icons[name], icon=name)


def icon_names() -> Tuple[str, ...]:
    return tuple(sorted(load_asset("icons.dvs")))


def map_regions() -> Dict[str, Tuple[Point, ...]]:
    return load_asset("world.dvs")


# ---------------------------------------------------------------- helpers


def slug(value: Scalar) -> str:
    s = re.sub(r"[^a-z0-9]+", "_", format_value(value).lower()).strip("_")
    return s or "x"


def format_value(v: Scalar) -> str:
    if isinstance(v, str):
        return v
    if float(v).is_integer():
        return str(int(v))
    return repr(float(v))


def parse_color(text: str) -> Tuple[int, int, int]:
    m = re.fullmatch(r"#([0-9A-Fa-f]{2})([0-9A-Fa-f]{2})([0-9A-Fa-f]{2})", text.strip())
    if not m:
        raise LayoutError(f"bad color {text!r}")
    return tuple(int(g, 16) for g in m.groups())


def row_key(row: Dict[str, Scalar], index: int, decl: ChartDecl) -> str:
    if "key" in row:
        return slug(row["key"])
    cat = decl.option("category")
    if cat and cat in row:
        return slug(row[cat])
    return str(index)


def _number(row: Dict[str, Scalar], fld: str, decl: ChartDecl) -> float:
    if fld not in row:
        raise LayoutError(f"chart {decl.id}: row lacks field {fld!r}")
    v = row[fld]
    if isinstance(v, str):
        raise LayoutError(f"chart {decl.id}: field {fld!r} must be numeric, got {v!r}")
    return float(v)


def _color_for(row: Dict[str, Scalar], i: int, decl: ChartDecl) -> Tuple[int, int, int]:
    if isinstance(row.get("color"), str):
        return parse_color(row["color"])
    palette = decl.option("palette") or PALETTE
    return tuple(palette[i % len(palette)])


def _el(eid, kind, shape, pos, color=INK, size=1.0, binding=None, orientation=0.0):
    return VisualElement(
        eid,
        kind,
        VisualVariables(shape=shape, position=pos, size=size, color=color, orientation=orientation),
        binding,
    )


def _text(eid, kind, text, pos, font=LABEL_FONT, color=INK, binding=None):
    return _el(eid, kind, text_run(text, font), pos, color, binding=binding)


def _segment(eid, kind, p, q, color=INK, binding=None):
    mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
    verts = ((p[0] - mid[0], p[1] - mid[1]), (q[0] - mid[0], q[1] - mid[1]))
    return _el(eid, kind, Geometry("polyline", vertices=verts), mid, color, binding=binding)


def resolve_binding(datasets: Dict[str, Dataset], decl: ChartDecl, binding) -> List[dict]:
    """Rows of the bound dataset whose layout key matches the binding."""
    ds = datasets[binding[0]]
    return [r for i, r in enumerate(ds.records()) if row_key(r, i, decl) == binding[1]]


# ---------------------------------------------------------------- layout


def _sorted_rows(decl: ChartDecl, data: Dataset):
    recs = list(enumerate(data.records()))
    cat = decl.option("category")
    if cat:
        for _, r in recs:
            if cat not in r:
                raise LayoutError(f"chart {decl.id}: row lacks field {cat!r}")
        recs.sort(key=lambda ir: format_value(ir[1][cat]))
    return recs


def _legend(decl, keyed, x0, y0):
    out = []
    n = len(keyed)
    for i, (key, label, color) in enumerate(keyed):
        y = y0 - (n - 1) * 15.0 + i * 30.0
        out.append(_el(f"{decl.id}_legend_{key}", "legend", rectangle(16, 16), (x0, y), color))
        text_x = x0 + 16 + 0.3 * LABEL_FONT * max(len(label), 1)
        out.append(_text(f"{decl.id}_legend_{key}_text", "legend", label, (text_x, y)))
    return out


def _pie(decl, data, recs, inner):
    ax, ay = decl.at
    radius = decl.option("radius") or min(decl.extent) / 2.0
    vfield, cfield = decl.option("value"), decl.option("category")
    values = []
    for i, r in recs:
        v = _number(r, vfield, decl)
        if v < 0:
            raise LayoutError(f"chart {decl.id}: negative value {v} for an angle encoding")
        values.append(v)
    total = sum(values)
    if total <= 0:
        raise LayoutError(f"chart {decl.id}: values sum to zero")
    out, keyed, cum = [], [], 0.0
    last = max(j for j, v in enumerate(values) if v > 0)
    for j, ((i, r), v) in enumerate(zip(recs, values)):
        key = row_key(r, i, decl)
        color = _color_for(r, j, decl)
        keyed.append((key, format_value(r[cfield]), color))
        start = 360.0 * cum / total
        cum += v
        end = 360.0 if j == last else 360.0 * cum / total
        if v == 0:
            continue
        out.append(_el(
            f"{decl.id}_{key}", "chart_mark", sector(radius, start, end, inner),
            (ax, ay), color, binding=(data.id, key, vfield),
        ))
    return out + _legend(decl, keyed, ax + radius + 40.0, ay)


def _bars(decl, data, recs):
    ax, ay = decl.at
    w, h = decl.extent
    vfield, cfield = decl.option("value"), decl.option("category")
    values = [_number(r, vfield, decl) for _, r in recs]
    top = max((abs(v) for v in values), default=0.0) or 1.0
    n = max(len(recs), 1)
    slot, base = w / n, ay + h / 2
    out = [_segment(f"{decl.id}_axis", "axis", (ax - w / 2, base), (ax + w / 2, base))]
    for j, ((i, r), v) in enumerate(zip(recs, values)):
        key = row_key(r, i, decl)
        x = ax - w / 2 + slot * (j + 0.5)
        bh = h * abs(v) / top
        if bh > 0:
            y = base - bh / 2 if v >= 0 else base + bh / 2
            out.append(_el(
                f"{decl.id}_{key}", "chart_mark", rectangle(slot * 0.7, bh), (x, y),
                _color_for(r, j, decl), binding=(data.id, key, vfield),
            ))
        out.append(_text(f"{decl.id}_label_{key}", "label", format_value(r[cfield]), (x, base + 18)))
    return out


def _xy(decl, data, lines: bool):
    ax, ay = decl.at
    w, h = decl.extent
    xf, yf = decl.option("x"), decl.option("y")
    recs = list(enumerate(data.records()))
    pts = [(_number(r, xf, decl), _number(r, yf, decl)) for _, r in recs]
    order = sorted(range(len(recs)), key=lambda k: (pts[k][0], pts[k][1], k))
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]

    def lerp(v, lo, hi, a, b):
        return (a + b) / 2 if hi == lo else a + (b - a) * (v - lo) / (hi - lo)

    def place(p):
        return (
            lerp(p[0], min(xs), max(xs), ax - w / 2, ax + w / 2),
            lerp(p[1], min(ys), max(ys), ay + h / 2, ay - h / 2),
        )

    out = [
        _segment(f"{decl.id}_xaxis", "axis", (ax - w / 2, ay + h / 2), (ax + w / 2, ay + h / 2)),
        _segment(f"{decl.id}_yaxis", "axis", (ax - w / 2, ay + h / 2), (ax - w / 2, ay - h / 2)),
    ]
    r = decl.option("radius") or 5.0
    prev = None
    for j, k in enumerate(order):
        i, row = recs[k]
        key = row_key(row, i, decl)
        color = _color_for(row, 0, decl)
        pos = place(pts[k])
        if lines and prev is not None:
            out.append(_segment(
                f"{decl.id}_seg_{key}", "chart_mark", prev, pos, color, binding=(data.id, key, yf)
            ))
        out.append(_el(
            f"{decl.id}_{key}", "chart_mark", circle(r), pos, color, binding=(data.id, key, yf)
        ))
        prev = pos
    return out


def _areas(decl, data, recs):
    ax, ay = decl.at
    w, h = decl.extent
    vfield, cfield = decl.option("value"), decl.option("category")
    values = []
    for _, r in recs:
        v = _number(r, vfield, decl)
        if v < 0:
            raise LayoutError(f"chart {decl.id}: negative value {v} for an area encoding")
        values.append(v)
    n = max(len(recs), 1)
    base_r = decl.option("radius") or 0.45 * min(w / n, h)
    ref = decl.option("ref") or max(values, default=0.0) or 1.0
    out, keyed = [], []
    for j, ((i, r), v) in enumerate(zip(recs, values)):
        key = row_key(r, i, decl)
        color = _color_for(r, j, decl)
        keyed.append((key, format_value(r[cfield]), color))
        x = ax - w / 2 + w / n * (j + 0.5)
        out.append(_el(
            f"{decl.id}_{key}", "chart_mark", circle(base_r), (x, ay), color,
            size=math.sqrt(v / ref), binding=(data.id, key, vfield),
        ))
    return out + _legend(decl, keyed, ax - w / 2 + 10.0, ay + h / 2 + 30.0)


def _pictograph(decl, data, recs):
    ax, ay = decl.at
    w, h = decl.extent
    vfield, cfield = decl.option("value"), decl.option("category")
    unit = decl.option("unit") or 1.0
    shape = icon_geometry(decl.option("icon") or "person")
    counts = []
    for _, r in recs:
        v = _number(r, vfield, decl)
        if v < 0:
            raise LayoutError(f"chart {decl.id}: negative value {v} for a unit encoding")
        counts.append(int(math.floor(v / unit + 0.5)))
    rows = max(len(recs), 1)
    row_h = h / rows
    step = min(w / max(max(counts, default=1), 1), row_h)
    out = []
    for j, ((i, r), count) in enumerate(zip(recs, counts)):
        key = row_key(r, i, decl)
        y = ay - h / 2 + row_h * (j + 0.5)
        color = _color_for(r, j, decl)
        out.append(_text(f"{decl.id}_label_{key}", "label", format_value(r[cfield]),
                         (ax - w / 2 - 60.0, y)))
        for k in range(count):
            x = ax - w / 2 + step * (k + 0.5)
            out.append(_el(
                f"{decl.id}_{key}_{k}", "icon", shape, (x, y), color,
                size=0.9 * step / 100.0, binding=(data.id, key, vfield),
            ))
    return out


def _map(decl, data, recs):
    ax, ay = decl.at
    w, h = decl.extent
    regions = map_regions()
    s = min(w / 360.0, h / 180.0)
    cfield = decl.option("category")
    vfield = decl.option("value")
    by_region = {}
    for j, (i, r) in enumerate(recs):
        rid = slug(r[cfield])
        if rid not in regions:
            raise LayoutError(f"chart {decl.id}: unknown map region {rid!r}")
        by_region[rid] = (i, j, r)
    out = []
    for rid in sorted(regions):
        verts = regions[rid]
        cx = sum(p[0] for p in verts) / len(verts)
        cy = sum(p[1] for p in verts) / len(verts)
        local = tuple(((x - cx) * s, (y - cy) * s) for x, y in verts)
        pos = (ax + cx * s, ay + cy * s)
        shape = Geometry("polygon", vertices=local)
        if rid in by_region:
            i, j, r = by_region[rid]
            binding = (data.id, row_key(r, i, decl), vfield or cfield)
            out.append(_el(f"{decl.id}_{rid}", "chart_mark", shape, pos, _color_for(r, j, decl),
                           binding=binding))
        else:
            out.append(_el(f"{decl.id}_{rid}", "chart_mark", shape, pos, LAND))
    return out


def _diagram(decl, data):
    ax, ay = decl.at
    w, h = decl.extent
    ff, tf = decl.option("from"), decl.option("to")
    recs = data.records()
    nodes: List[str] = []
    for r in recs:
        for f in (ff, tf):
            if f not in r:
                raise LayoutError(f"chart {decl.id}: row lacks field {f!r}")
            name = format_value(r[f])
            if name not in nodes:
                nodes.append(name)
    n = max(len(nodes), 1)
    slot = w / n
    nw, nh = slot * 0.6, min(h * 0.3, 60.0)
    pos = {name: (ax - w / 2 + slot * (k + 0.5), ay) for k, name in enumerate(nodes)}
    out = []
    for name in nodes:
        out.append(_el(f"{decl.id}_node_{slug(name)}", "chart_mark", rectangle(nw, nh), pos[name],
                       PALETTE[0]))
        out.append(_text(f"{decl.id}_node_{slug(name)}_text", "label", name, pos[name],
                         color=(255, 255, 255)))
    for i, r in enumerate(recs):
        a, b = pos[format_value(r[ff])], pos[format_value(r[tf])]
        dx = nw / 2 if b[0] >= a[0] else -nw / 2
        p, q = (a[0] + dx, a[1]), (b[0] - dx, b[1])
        if p == q:
            q = (q[0], q[1] + nh)
        key = row_key(r, i, decl)
        out.append(_segment(f"{decl.id}_arrow_{i}", "annotation", p, q,
                            binding=(data.id, key, tf)))
    return out


def _number_icon_text(decl, data, recs):
    ax, ay = decl.at
    w, h = decl.extent
    vfield, cfield = decl.option("value"), decl.option("category")
    shape = icon_geometry(decl.option("icon") or "person")
    n = max(len(recs), 1)
    slot = w / n
    out = []
    for j, (i, r) in enumerate(recs):
        key = row_key(r, i, decl)
        x = ax - w / 2 + slot * (j + 0.5)
        color = _color_for(r, j, decl)
        size = min(slot, h / 2) * 0.6 / 100.0
        out.append(_el(f"{decl.id}_{key}_icon", "icon", shape, (x, ay - h / 4), color, size=size))
        v = _number(r, vfield, decl)
        out.append(_text(f"{decl.id}_{key}", "number", format_value(v), (x, ay + h / 8),
                         font=min(h / 4, 48.0), color=color, binding=(data.id, key, vfield)))
        out.append(_text(f"{decl.id}_{key}_text", "label", format_value(r[cfield]),
                         (x, ay + h / 2 - LABEL_FONT)))
    return out


def layout_chart(decl: ChartDecl, data: Dataset) -> List[VisualElement]:
    """Deterministic element list for one chart declaration."""
    for role in REQUIRED_ROLES[decl.vis_type]:
        if not decl.option(role):
            raise LayoutError(f"chart {decl.id}: {decl.vis_type} needs the {role!r} role")
    if not data.rows:
        raise LayoutError(f"chart {decl.id}: dataset {data.id!r} is empty")
    vt = decl.vis_type
    if vt in ("line_chart", "scatter_plot"):
        return _xy(decl, data, vt == "line_chart")
    if vt == "diagram":
        return _diagram(decl, data)
    recs = _sorted_rows(decl, data)
    if vt == "pie":
        return _pie(decl, data, recs, decl.option("inner") or 0.0)
    if vt == "donut":
        inner = decl.option("inner")
        return _pie(decl, data, recs, 0.5 if inner is None else inner)
    if vt == "bar_chart":
        return _bars(decl, data, recs)
    if vt == "proportional_area":
        return _areas(decl, data, recs)
    if vt == "pictograph":
        return _pictograph(decl, data, recs)
    if vt == "map":
        return _map(decl, data, recs)
    return _number_icon_text(decl, data, recs)


def expand_scene(scene: Scene, datasets: Dict[str, Dataset]) -> Scene:
    """Replace a scene's chart declarations with their laid-out elements."""
    if not scene.charts:
        return scene
    explicit = list(scene.elements)
    out: List[VisualElement] = []
    by_slot: Dict[int, List[ChartDecl]] = {}
    for slot, decl in scene.charts:
        by_slot.setdefault(slot, []).append(decl)
    for k in range(len(explicit) + 1):
        for decl in by_slot.get(k, ()):
            if decl.dataset not in datasets:
                raise LayoutError(f"chart {decl.id}: unknown dataset {decl.dataset!r}")
            out.extend(layout_chart(decl, datasets[decl.dataset]))
        if k < len(explicit):
            out.append(explicit[k])
    return replace(scene, elements=tuple(out), charts=())
