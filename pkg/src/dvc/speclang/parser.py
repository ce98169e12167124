"""Hand-written recursive-descent parser for DVS documents.

Parsing is total: every failure becomes a diagnostic with a span, and the
parser resynchronizes at the next line so one document reports all of its
problems at once. `parse` raises ParseError when any error was recorded.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ..charts import CHART_OPTIONS, ChartDecl, Dataset
from ..geometry import Geometry, GeometryError
from ..model import (
    CLIP_FORMS,
    ELEMENT_KINDS,
    VIS_TYPES,
    CameraPose,
    ModelError,
    Scene,
    VisualElement,
    VisualVariables,
)
from ..taxonomy import CANONICAL_NAMES
from .diagnostics import Diagnostic, ParseError, Span, error, sort_diagnostics
from .document import (
    DEFAULT_DURATION,
    DEFAULT_EASING,
    EASINGS,
    RELATIONS,
    ClipSpec,
    TransitionEntry,
    VideoSpec,
)
from .lexer import COLOR, EOF, IDENT, NEWLINE, NUMBER, STRING, Token, tokenize

TOP_KEYWORDS = ("video", "data", "scene", "clip", "segment")
DEFAULT_FONT = 24.0


class _Fail(Exception):
    """Unwinds to the nearest statement boundary after a diagnostic."""


@dataclass(frozen=True)
class Value:
    kind: str  # number | string | color | ident | path | tuple | list
    data: object
    span: Span


def _join(a: Span, b: Span) -> Span:
    return Span(a.line, a.column, b.offset + b.length - a.offset, a.offset)


class Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens, self.diags = tokenize(source)
        self.pos = 0
        self.spans: Dict = {}

    # ------------------------------------------------------------ tokens

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def advance(self) -> Token:
        t = self.tok
        if t.kind != EOF:
            self.pos += 1
        return t

    def fail(self, span: Span, code: str, message: str):
        self.diags.append(error(span, code, message))
        raise _Fail()

    def expect(self, kind: str, text: Optional[str] = None, what: str = "") -> Token:
        if self.at(kind, text):
            return self.advance()
        want = what or (repr(text) if text else kind)
        got = "end of file" if self.tok.kind == EOF else repr(self.tok.text)
        self.fail(self.tok.span, "syntax-error", f"expected {want}, found {got}")

    def skip_newlines(self) -> None:
        while self.at(NEWLINE) or self.at("punct", ";"):
            self.advance()

    def end_statement(self) -> None:
        if self.at(NEWLINE) or self.at("punct", ";") or self.at(EOF) or self.at("punct", "}"):
            return
        self.fail(self.tok.span, "syntax-error", f"unexpected {self.tok.text!r}")

    def sync_line(self) -> None:
        """Skip the rest of the current line, keeping braces balanced."""
        depth = 0
        while not self.at(EOF):
            if self.at("punct", "{"):
                depth += 1
            elif self.at("punct", "}"):
                if depth == 0:
                    return
                depth -= 1
            elif self.at(NEWLINE) and depth == 0:
                return
            self.advance()

    def sync_top(self) -> None:
        depth = 0
        while not self.at(EOF):
            t = self.advance()
            if t.kind == "punct" and t.text == "{":
                depth += 1
            elif t.kind == "punct" and t.text == "}":
                depth = max(0, depth - 1)
            elif t.kind == NEWLINE and depth == 0:
                if self.at(IDENT) and self.tok.text in TOP_KEYWORDS:
                    return

    # ------------------------------------------------------------ values

    def value(self) -> Value:
        t = self.tok
        if t.kind == NUMBER:
            self.advance()
            return Value("number", t.value, t.span)
        if t.kind == STRING:
            self.advance()
            return Value("string", t.value, t.span)
        if t.kind == COLOR:
            self.advance()
            return Value("color", t.value, t.span)
        if t.kind == IDENT:
            parts, start, end = [self.advance().text], t.span, t.span
            while self.at("punct", "."):
                self.advance()
                nxt = self.expect(IDENT, what="identifier after '.'")
                parts.append(nxt.text)
                end = nxt.span
            if len(parts) == 1:
                return Value("ident", parts[0], start)
            return Value("path", tuple(parts), _join(start, end))
        if self.at("punct", "("):
            return self.number_tuple()
        if self.at("punct", "["):
            start = self.advance().span
            items = []
            while not self.at("punct", "]"):
                if self.at("punct", ","):
                    self.advance()
                    continue
                if self.at(COLOR):
                    c = self.advance()
                    items.append(Value("color", c.value, c.span))
                elif self.at("punct", "("):
                    items.append(self.number_tuple())
                else:
                    self.expect("punct", "]")
            end = self.advance().span
            return Value("list", tuple(items), _join(start, end))
        self.fail(t.span, "syntax-error", f"expected a value, found {t.text or 'end of file'!r}")

    def number_tuple(self) -> Value:
        start = self.expect("punct", "(").span
        nums = [self.expect(NUMBER, what="number").value]
        while self.at("punct", ","):
            self.advance()
            nums.append(self.expect(NUMBER, what="number").value)
        end = self.expect("punct", ")").span
        return Value("tuple", tuple(nums), _join(start, end))

    def attrs(self) -> List[Tuple[Token, Value]]:
        out = []
        while self.at(IDENT):
            name = self.advance()
            self.expect("punct", "=", what="'=' after attribute name")
            out.append((name, self.value()))
        return out

    # ------------------------------------------------------------ typing

    def mismatch(self, name: str, v: Value, want: str) -> None:
        self.diags.append(error(v.span, "type-mismatch", f"attribute {name!r} expects {want}"))

    def typed(self, name: str, v: Value, want: str):
        """Convert `v` to the Python value for type `want`, or record a mismatch."""
        k, d = v.kind, v.data
        if want == "number" and k == "number":
            return d
        if want == "positive" and k == "number":
            if d > 0:
                return d
            self.diags.append(error(v.span, "invalid-value", f"attribute {name!r} must be positive"))
            return None
        if want == "int" and k == "number" and float(d).is_integer():
            return int(d)
        if want == "posint" and k == "number" and float(d).is_integer() and d > 0:
            return int(d)
        if want == "string" and k == "string":
            return d
        if want == "color" and k == "color":
            return d
        if want == "ident" and k == "ident":
            return d
        if want == "point" and k == "tuple" and len(d) == 2:
            return (float(d[0]), float(d[1]))
        if want == "pose" and k == "tuple" and len(d) == 4:
            return d
        if want == "points" and k == "list" and all(
            i.kind == "tuple" and len(i.data) == 2 for i in d
        ):
            return tuple((float(i.data[0]), float(i.data[1])) for i in d)
        if want == "colors" and k == "list" and d and all(i.kind == "color" for i in d):
            return tuple(i.data for i in d)
        if want == "binding" and k == "path" and len(d) == 3:
            return d
        self.mismatch(name, v, _WANT_TEXT[want])
        return None

    def schema(self, attrs, table: Dict[str, str], what: str) -> Dict[str, object]:
        out: Dict[str, object] = {}
        for name, v in attrs:
            if name.text in out:
                self.diags.append(error(name.span, "duplicate-attribute",
                                        f"attribute {name.text!r} given twice"))
                continue
            if name.text not in table:
                self.diags.append(error(name.span, "unknown-attribute",
                                        f"unknown attribute {name.text!r} on {what}"))
                continue
            val = self.typed(name.text, v, table[name.text])
            if val is not None:
                out[name.text] = val
        return out

    # ------------------------------------------------------------ document

    def document(self) -> Optional[VideoSpec]:
        self.skip_newlines()
        header = None
        try:
            header = self.header()
        except _Fail:
            self.sync_top()
        datasets: List[Dataset] = []
        scenes: List[Scene] = []
        clips: List[ClipSpec] = []
        segment_next = False
        while True:
            self.skip_newlines()
            if self.at(EOF):
                break
            try:
                kw = self.expect(IDENT, what="'data', 'scene', 'clip' or 'segment'")
                if kw.text == "data":
                    datasets.append(self.dataset())
                elif kw.text == "scene":
                    scenes.append(self.scene())
                elif kw.text == "clip":
                    clips.append(self.clip(len(clips), segment_next))
                    segment_next = False
                elif kw.text == "segment":
                    segment_next = bool(clips)
                    self.end_statement()
                elif kw.text == "video":
                    self.fail(kw.span, "syntax-error", "duplicate 'video' header")
                else:
                    self.fail(kw.span, "syntax-error", f"unknown statement {kw.text!r}")
            except _Fail:
                self.sync_top()
        if header is None:
            return None
        self.resolve(datasets, scenes, clips)
        title, attrs = header
        return VideoSpec(
            title=title,
            fps=attrs.get("fps", 30),
            width=attrs.get("width", 960),
            height=attrs.get("height", 540),
            background=attrs.get("background", (255, 255, 255)),
            datasets=tuple(datasets),
            scenes=tuple(scenes),
            clips=tuple(clips),
            spans=self.spans,
        )

    def header(self):
        kw = self.expect(IDENT, "video", what="'video' header")
        title = self.expect(STRING, what="video title string")
        attrs = self.schema(self.attrs(), _VIDEO_ATTRS, "video")
        self.end_statement()
        self.spans["header"] = _join(kw.span, title.span)
        return title.value, attrs

    def block_open(self) -> None:
        self.expect("punct", "{", what="'{'")

    def dataset(self) -> Dataset:
        name = self.expect(IDENT, what="dataset name")
        self.spans[("dataset", name.text)] = name.span
        self.block_open()
        rows = []
        while True:
            self.skip_newlines()
            if self.at("punct", "}"):
                self.advance()
                break
            try:
                rows.append(self.row())
                self.end_statement()
            except _Fail:
                self.sync_line()
                if self.at(EOF):
                    self.fail(self.tok.span, "syntax-error", "unterminated data block")
        return Dataset(name.text, tuple(rows))

    def row(self):
        self.expect("punct", "(", what="'(' to start a row")
        fields, seen = [], set()
        while not self.at("punct", ")"):
            if self.at("punct", ","):
                self.advance()
                continue
            name = self.expect(IDENT, what="field name")
            self.expect("punct", "=")
            t = self.tok
            if t.kind in (NUMBER, STRING):
                val = t.value
            elif t.kind == COLOR:
                val = t.text
            elif t.kind == IDENT:
                val = t.text
            else:
                self.fail(t.span, "syntax-error", "expected a number, string or color")
            self.advance()
            if name.text in seen:
                self.diags.append(error(name.span, "duplicate-attribute",
                                        f"field {name.text!r} given twice"))
                continue
            seen.add(name.text)
            fields.append((name.text, val))
        self.advance()
        return tuple(fields)

    def scene(self) -> Scene:
        name = self.expect(IDENT, what="scene name")
        sid = name.text
        self.spans[("scene", sid)] = name.span
        attrs = self.schema(self.attrs(), _SCENE_ATTRS, "scene")
        form = attrs.get("form", "visualization")
        vis = attrs.get("vis")
        for key, allowed in (("form", CLIP_FORMS), ("vis", VIS_TYPES)):
            if key in attrs and attrs[key] not in allowed:
                self.diags.append(error(name.span, "invalid-value",
                                        f"{key}={attrs[key]} is not one of {', '.join(allowed)}"))
                if key == "form":
                    form = "visualization"
                else:
                    vis = None
        camera = CameraPose()
        if "camera" in attrs:
            camera = self.pose(attrs["camera"], name.span)
        self.block_open()
        elements: List[VisualElement] = []
        charts = []
        ids: Dict[str, Span] = {}
        while True:
            self.skip_newlines()
            if self.at("punct", "}"):
                self.advance()
                break
            if self.at(EOF):
                self.fail(self.tok.span, "syntax-error", f"unterminated scene {sid!r}")
            try:
                kind = self.expect(IDENT, what="element kind or 'chart'")
                if kind.text == "chart":
                    decl, span = self.chart(sid)
                    self.note_id(ids, decl.id, span, sid)
                    charts.append((len(elements), decl))
                else:
                    el, span = self.element(kind, sid)
                    if self.note_id(ids, el.id, span, sid):
                        elements.append(el)
                self.end_statement()
            except _Fail:
                self.sync_line()
        try:
            return Scene(sid, tuple(elements), camera, form, vis, tuple(charts))
        except ModelError as exc:
            self.fail(name.span, "invalid-value", str(exc))

    def note_id(self, ids: Dict[str, Span], eid: str, span: Span, sid: str) -> bool:
        if eid in ids:
            self.diags.append(error(span, "duplicate-id",
                                    f"element id {eid!r} already declared in scene {sid!r}"))
            return False
        ids[eid] = span
        return True

    def pose(self, raw, span: Span) -> CameraPose:
        cx, cy, zoom, focus = raw
        if not zoom > 0:
            self.diags.append(error(span, "zoom-factor", f"camera zoom must be positive, got {zoom}"))
            return CameraPose((cx, cy), 1.0, focus)
        return CameraPose((cx, cy), zoom, focus)

    def element(self, kind: Token, sid: str):
        if kind.text not in ELEMENT_KINDS:
            self.fail(kind.span, "syntax-error", f"unknown element kind {kind.text!r}")
        name = self.expect(IDENT, what="element id")
        attr_list = self.attrs()
        attrs = self.schema(attr_list, _ELEMENT_ATTRS, f"element {name.text!r}")
        span = name.span
        self.spans[("element", sid, name.text)] = span
        try:
            shape = build_shape(attrs)
            variables = VisualVariables(
                shape=shape,
                position=attrs.get("at", (0.0, 0.0)),
                size=attrs.get("size", 1.0),
                color=attrs.get("color", (0, 0, 0)),
                orientation=attrs.get("rot", 0.0),
                opacity=attrs.get("opacity", 1.0),
                depth=attrs.get("depth", 0),
            )
            return VisualElement(name.text, kind.text, variables, attrs.get("bind")), span
        except (GeometryError, ModelError, KeyError) as exc:
            msg = exc.args[0] if exc.args else str(exc)
            self.fail(span, "invalid-value", f"element {name.text!r}: {msg}")

    def chart(self, sid: str):
        vis = self.expect(IDENT, what="chart type")
        if vis.text not in VIS_TYPES:
            self.fail(vis.span, "invalid-value", f"unknown chart type {vis.text!r}")
        name = self.expect(IDENT, what="chart id")
        attrs = self.schema(self.attrs(), _CHART_ATTRS, f"chart {name.text!r}")
        self.spans[("chart", sid, name.text)] = name.span
        if "data" not in attrs:
            self.fail(name.span, "missing-attribute", f"chart {name.text!r} needs data=")
        options = tuple(sorted((k, v) for k, v in attrs.items() if k in CHART_OPTIONS))
        decl = ChartDecl(
            vis.text, name.text, attrs["data"],
            attrs.get("at", (0.0, 0.0)), attrs.get("extent", (400.0, 300.0)), options,
        )
        return decl, name.span

    def clip(self, index: int, new_segment: bool) -> ClipSpec:
        src = self.expect(IDENT, what="source scene")
        self.expect("punct", "->", what="'->'")
        dst = self.expect(IDENT, what="target scene")
        self.spans[("clip", index)] = _join(src.span, dst.span)
        self.spans[("clip-from", index)] = src.span
        self.spans[("clip-to", index)] = dst.span
        attrs = self.schema(self.attrs(), _CLIP_ATTRS, "clip")
        relation = attrs.get("relation")
        if relation is not None and relation not in RELATIONS:
            self.diags.append(error(dst.span, "invalid-value",
                                    f"relation={relation} is not one of {', '.join(RELATIONS)}"))
            relation = None
        self.block_open()
        transitions, maps, path = [], [], []
        halftime = None
        attempted = False
        while True:
            self.skip_newlines()
            if self.at("punct", "}"):
                self.advance()
                break
            if self.at(EOF):
                self.fail(self.tok.span, "syntax-error", "unterminated clip block")
            try:
                kw = self.expect(IDENT, what="'transition', 'map', 'halftime' or 'camera'")
                if kw.text == "transition":
                    attempted = True
                    entry = self.transition(index, len(transitions))
                    if entry is not None:
                        transitions.append(entry)
                elif kw.text == "map":
                    maps.append(self.mapping(index, len(maps)))
                elif kw.text == "halftime":
                    h = self.expect(IDENT, what="interstitial scene")
                    self.spans[("halftime", index)] = h.span
                    halftime = h.text
                elif kw.text == "camera":
                    path.extend(self.camera_keys(index))
                else:
                    self.fail(kw.span, "syntax-error", f"unknown clip statement {kw.text!r}")
                self.end_statement()
            except _Fail:
                self.sync_line()
        if not transitions:
            if attempted:
                raise _Fail()
            self.fail(self.spans[("clip", index)], "missing-transition",
                      f"clip {src.text} -> {dst.text} declares no transition")
        return ClipSpec(src.text, dst.text, tuple(transitions), tuple(maps), halftime,
                        tuple(path), new_segment, relation)

    def transition(self, clip_index: int, j: int) -> Optional[TransitionEntry]:
        first = self.expect(IDENT, what="transition name")
        parts, end = [first.text], first.span
        while self.at("punct", "."):
            self.advance()
            t = self.expect(IDENT, what="transition subtype")
            parts.append(t.text)
            end = t.span
        span = _join(first.span, end)
        name = ".".join(parts)
        attrs = self.schema(self.attrs(), _TRANSITION_ATTRS, f"transition {name!r}")
        if name not in CANONICAL_NAMES:
            self.diags.append(error(span, "unknown-transition", f"unknown transition {name!r}"))
            return None
        self.spans[("transition", clip_index, j)] = span
        if "easing" in attrs and attrs["easing"] not in EASINGS:
            self.diags.append(error(span, "invalid-value",
                                    f"unknown easing {attrs['easing']!r}"))
            attrs.pop("easing")
        params = tuple(sorted((k, v) for k, v in attrs.items() if k not in ("duration", "easing")))
        return TransitionEntry(
            CANONICAL_NAMES[name],
            attrs.get("duration", DEFAULT_DURATION),
            attrs.get("easing", DEFAULT_EASING),
            params,
        )

    def id_list(self) -> Tuple[str, ...]:
        ids = [self.expect(IDENT, what="element id").text]
        while self.at("punct", ","):
            self.advance()
            ids.append(self.expect(IDENT, what="element id").text)
        return tuple(ids)

    def mapping(self, clip_index: int, j: int):
        start = self.tok.span
        sources = self.id_list()
        self.expect("punct", "->", what="'->'")
        targets = self.id_list()
        span = _join(start, self.tokens[self.pos - 1].span)
        self.spans[("map", clip_index, j)] = span
        if len(sources) > 1 and len(targets) > 1:
            self.fail(span, "invalid-map", "a map may join many to one or one to many, not both")
        return (sources, targets)

    def camera_keys(self, clip_index: int):
        keys = []
        while self.at("punct", "("):
            v = self.number_tuple()
            raw = self.typed("camera", v, "pose")
            self.expect("punct", "@", what="'@' before keyframe time")
            t = self.expect(NUMBER, what="keyframe time")
            if not 0.0 <= t.value <= 1.0:
                self.diags.append(error(t.span, "invalid-value", "keyframe time must lie in [0, 1]"))
                continue
            if raw is not None:
                keys.append((t.value, self.pose(raw, v.span)))
        if not keys and not self.diags:
            self.fail(self.tok.span, "syntax-error", "expected camera keyframes")
        return keys

    # ------------------------------------------------------------ references

    def resolve(self, datasets, scenes, clips) -> None:
        def dup(kind, items, key):
            seen = set()
            for it in items:
                k = it.id
                if k in seen:
                    self.diags.append(error(self.spans.get((key, k), Span()), "duplicate-id",
                                            f"{kind} {k!r} declared twice"))
                seen.add(k)
            return seen

        data_ids = dup("dataset", datasets, "dataset")
        scene_ids = dup("scene", scenes, "scene")
        for s in scenes:
            for _, decl in s.charts:
                if decl.dataset not in data_ids:
                    self.diags.append(error(self.spans[("chart", s.id, decl.id)],
                                            "unresolved-reference",
                                            f"chart {decl.id!r} uses unknown dataset {decl.dataset!r}"))
            for el in s.elements:
                if el.data_binding and el.data_binding[0] not in data_ids:
                    self.diags.append(error(self.spans[("element", s.id, el.id)],
                                            "unresolved-reference",
                                            f"element {el.id!r} binds unknown dataset "
                                            f"{el.data_binding[0]!r}"))
        for i, c in enumerate(clips):
            for which, sid in (("clip-from", c.source), ("clip-to", c.target)):
                if sid not in scene_ids:
                    self.diags.append(error(self.spans[(which, i)], "unresolved-reference",
                                            f"unknown scene {sid!r}"))
            if c.halftime_scene is not None and c.halftime_scene not in scene_ids:
                self.diags.append(error(self.spans[("halftime", i)], "unresolved-reference",
                                        f"unknown scene {c.halftime_scene!r}"))


def build_shape(attrs: Dict[str, object]) -> Geometry:
    from ..charts import icon_geometry, LayoutError

    shape = attrs.get("shape")
    if shape is None:
        if "text" in attrs:
            shape = "text_run"
        elif "icon" in attrs:
            shape = "icon_path"
        elif "points" in attrs:
            shape = "polygon"
        elif "r" in attrs and "end" in attrs:
            shape = "arc_sector"
        elif "r" in attrs:
            shape = "circle"
        elif "w" in attrs or "h" in attrs:
            shape = "rectangle"
        else:
            raise GeometryError("no shape given")
    if shape == "circle":
        return Geometry("circle", radius=attrs.get("r", 0.0))
    if shape == "rectangle":
        return Geometry("rectangle", width=attrs.get("w", 0.0), height=attrs.get("h", 0.0))
    if shape == "arc_sector":
        return Geometry("arc_sector", radius=attrs.get("r", 0.0), start=attrs.get("start", 0.0),
                        end=attrs.get("end", 0.0), inner=attrs.get("inner", 0.0))
    if shape in ("polygon", "polyline"):
        return Geometry(shape, vertices=attrs.get("points", ()))
    if shape == "icon_path":
        if "icon" in attrs:
            try:
                return icon_geometry(attrs["icon"])
            except LayoutError as exc:
                raise GeometryError(str(exc)) from None
        return Geometry("icon_path", vertices=attrs.get("points", ()))
    if shape == "text_run":
        return Geometry("text_run", text=attrs.get("text", ""),
                        font_size=attrs.get("font", DEFAULT_FONT))
    raise GeometryError(f"unknown shape {shape!r}")


_WANT_TEXT = {
    "number": "a number",
    "positive": "a positive number",
    "int": "an integer",
    "posint": "a positive integer",
    "string": "a string",
    "color": "a #RRGGBB color",
    "ident": "an identifier",
    "point": "a point (x,y)",
    "pose": "a camera pose (cx,cy,zoom,focus)",
    "points": "a point list [(x,y) ...]",
    "colors": "a color list [#RRGGBB ...]",
    "binding": "a dataset.row.field path",
}
_VIDEO_ATTRS = {"fps": "posint", "width": "posint", "height": "posint", "background": "color"}
_CLIP_ATTRS = {"relation": "ident"}
_SCENE_ATTRS = {"form": "ident", "vis": "ident", "camera": "pose"}
_ELEMENT_ATTRS = {
    "shape": "ident", "at": "point", "size": "number", "color": "color", "rot": "number",
    "opacity": "number", "depth": "int", "bind": "binding", "r": "number", "w": "number",
    "h": "number", "start": "number", "end": "number", "inner": "number", "points": "points",
    "text": "string", "font": "number", "icon": "ident",
}
_CHART_ATTRS = {"data": "ident", "at": "point", "extent": "point"}
_CHART_ATTRS.update(
    {k: {"field": "ident", "number": "number", "ident": "ident", "colors": "colors"}[v]
     for k, v in CHART_OPTIONS.items()}
)
_TRANSITION_ATTRS = {
    "duration": "positive", "easing": "ident", "direction": "ident", "focus": "ident",
    "item": "ident", "background": "ident", "factor": "number",
}


def parse_with_diagnostics(source: str) -> Tuple[Optional[VideoSpec], List[Diagnostic]]:
    p = Parser(source)
    spec = p.document()
    diags = sort_diagnostics(p.diags)
    if spec is None and not diags:
        diags = [error(Span(1, 1, 0, 0), "syntax-error", "empty document")]
    return spec, diags


def parse(source: str) -> VideoSpec:
    spec, diags = parse_with_diagnostics(source)
    if spec is None or any(d.severity == "error" for d in diags):
        raise ParseError(diags)
    return spec
