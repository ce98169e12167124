"""Scene-graph types and the diffing between two narrative states."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from .geometry import Geometry, Point, bounding_radius, max_deviation

ELEMENT_KINDS = (
    "chart_mark",
    "axis",
    "legend",
    "label",
    "icon",
    "text",
    "number",
    "background",
    "annotation",
)
CLIP_FORMS = ("visualization", "non_visualization")
VIS_TYPES = (
    "line_chart",
    "scatter_plot",
    "bar_chart",
    "map",
    "proportional_area",
    "pie",
    "donut",
    "diagram",
    "pictograph",
    "number_icon_text",
)

# channel order is the canonical order used everywhere channels are listed
CHANNELS = ("position", "size", "color", "shape", "orientation", "opacity")
GROUP_CHANNELS = CHANNELS + ("count",)

Color = Tuple[int, int, int]


class ModelError(ValueError):
    pass


class CorrespondenceError(ModelError):
    pass


@dataclass(frozen=True)
class VisualVariables:
    shape: Geometry
    position: Point = (0.0, 0.0)
    size: float = 1.0
    color: Color = (0, 0, 0)
    orientation: float = 0.0
    opacity: float = 1.0
    depth: int = 0

    def __post_init__(self) -> None:
        x, y = self.position
        object.__setattr__(self, "position", (float(x), float(y)))
        if not self.size >= 0:
            raise ModelError("size must be nonnegative")
        if not 0.0 <= self.opacity <= 1.0:
            raise ModelError("opacity must lie in [0, 1]")
        if len(self.color) != 3 or any(
            not isinstance(c, int) or not 0 <= c <= 255 for c in self.color
        ):
            raise ModelError("color channels must be integers in [0, 255]")
        object.__setattr__(self, "color", tuple(self.color))
        object.__setattr__(self, "orientation", float(self.orientation) % 360.0)
        if not isinstance(self.depth, int) or self.depth < 0:
            raise ModelError("depth must be a nonnegative integer")

    @property
    def extent(self) -> float:
        """Displayed size: scale factor times the outline's bounding radius."""
        return self.size * bounding_radius(self.shape)


DataBinding = Tuple[str, str, str]


@dataclass(frozen=True)
class VisualElement:
    id: str
    kind: str
    variables: VisualVariables
    data_binding: Optional[DataBinding] = None
    # viewport-fraction clip rect (x0, y0, x1, y1); only set on sampled frames
    clip: Optional[Tuple[float, float, float, float]] = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ModelError("element id must be non-empty")
        if self.kind not in ELEMENT_KINDS:
            raise ModelError(f"unknown element kind {self.kind!r}")

    def with_vars(self, **changes) -> "VisualElement":
        return replace(self, variables=replace(self.variables, **changes))


@dataclass(frozen=True)
class CameraPose:
    center: Point = (0.0, 0.0)
    zoom: float = 1.0
    focus_depth: float = 0.0

    def __post_init__(self) -> None:
        x, y = self.center
        object.__setattr__(self, "center", (float(x), float(y)))
        if not self.zoom > 0:
            raise ModelError("camera zoom must be positive")


@dataclass(frozen=True)
class Scene:
    id: str
    elements: Tuple[VisualElement, ...] = ()
    camera: CameraPose = field(default_factory=CameraPose)
    clip_form: str = "visualization"
    vis_type: Optional[str] = None
    # chart declarations awaiting layout; each is (slot, ChartDecl) where slot
    # counts the explicit elements declared before it
    charts: Tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        seen = set()
        for el in self.elements:
            if el.id in seen:
                raise ModelError(f"duplicate element id {el.id!r} in scene {self.id!r}")
            seen.add(el.id)
        if self.clip_form not in CLIP_FORMS:
            raise ModelError(f"unknown clip form {self.clip_form!r}")
        if self.vis_type is not None and self.vis_type not in VIS_TYPES:
            raise ModelError(f"unknown vis type {self.vis_type!r}")

    def element(self, element_id: str) -> VisualElement:
        for el in self.elements:
            if el.id == element_id:
                return el
        raise KeyError(element_id)

    def ids(self) -> Tuple[str, ...]:
        return tuple(el.id for el in self.elements)

    def form_ok(self) -> bool:
        if self.clip_form != "visualization":
            return True
        return self.vis_type is not None or any(
            el.data_binding is not None for el in self.elements
        )


@dataclass(frozen=True)
class Tolerances:
    position: float = 1e-6
    size: float = 1e-6
    orientation: float = 1e-4
    color: int = 0
    opacity: float = 1e-6


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class VariableDelta:
    source: str
    target: str
    changed: FrozenSet[str]
    preserved: FrozenSet[str]


def shape_changed(a: Geometry, b: Geometry, tol: float) -> bool:
    if a.kind != b.kind or a.closed != b.closed:
        return True
    if a.kind == "text_run" and a.text != b.text:
        return True
    if a == b:
        return False
    return max_deviation(a, b) > tol


def angle_between(a: float, b: float) -> float:
    d = abs(a - b) % 360.0
    return min(d, 360.0 - d)


def changed_channels(
    a: VisualVariables, b: VisualVariables, tol: Tolerances = DEFAULT_TOLERANCES
) -> FrozenSet[str]:
    out = set()
    if math.dist(a.position, b.position) > tol.position:
        out.add("position")
    if abs(a.extent - b.extent) > tol.size:
        out.add("size")
    if any(abs(x - y) > tol.color for x, y in zip(a.color, b.color)):
        out.add("color")
    if shape_changed(a.shape, b.shape, tol.position):
        out.add("shape")
    if angle_between(a.orientation, b.orientation) > tol.orientation:
        out.add("orientation")
    if abs(a.opacity - b.opacity) > tol.opacity:
        out.add("opacity")
    return frozenset(out)


def variable_delta(
    a: VisualElement, b: VisualElement, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> VariableDelta:
    changed = changed_channels(a.variables, b.variables, tolerances)
    return VariableDelta(a.id, b.id, changed, frozenset(CHANNELS) - changed)


@dataclass(frozen=True)
class Pair:
    source: str
    target: str
    method: str = "explicit"


@dataclass(frozen=True)
class Group:
    """Many-to-one (merge) or one-to-many (split) element correspondence."""

    sources: Tuple[str, ...]
    targets: Tuple[str, ...]

    @property
    def is_merge(self) -> bool:
        return len(self.sources) >= 2 and len(self.targets) == 1

    @property
    def is_split(self) -> bool:
        return len(self.sources) == 1 and len(self.targets) >= 2


@dataclass(frozen=True)
class Correspondence:
    pairs: Tuple[Pair, ...] = ()
    groups: Tuple[Group, ...] = ()

    def source_ids(self) -> Tuple[str, ...]:
        return tuple(p.source for p in self.pairs) + tuple(
            s for g in self.groups for s in g.sources
        )

    def target_ids(self) -> Tuple[str, ...]:
        return tuple(p.target for p in self.pairs) + tuple(
            t for g in self.groups for t in g.targets
        )

    def mapping(self) -> Dict[str, str]:
        return {p.source: p.target for p in self.pairs}

    @property
    def empty(self) -> bool:
        return not self.pairs and not self.groups


@dataclass(frozen=True)
class GroupDelta:
    group: Group
    changed: FrozenSet[str]
    preserved: FrozenSet[str]


@dataclass(frozen=True)
class CameraDelta:
    dx: float = 0.0
    dy: float = 0.0
    dzoom: float = 0.0
    dfocus: float = 0.0

    def axes(self, eps: float = 1e-9) -> FrozenSet[str]:
        names = ("center_x", "center_y", "zoom", "focus")
        vals = (self.dx, self.dy, self.dzoom, self.dfocus)
        return frozenset(n for n, v in zip(names, vals) if abs(v) > eps)

    @property
    def nonzero(self) -> bool:
        return bool(self.axes())


def camera_delta(a: CameraPose, b: CameraPose) -> CameraDelta:
    return CameraDelta(
        b.center[0] - a.center[0],
        b.center[1] - a.center[1],
        b.zoom - a.zoom,
        b.focus_depth - a.focus_depth,
    )


@dataclass(frozen=True)
class SceneDelta:
    matched: Tuple[VariableDelta, ...]
    exited: Tuple[str, ...]
    entered: Tuple[str, ...]
    camera_delta: CameraDelta
    groups: Tuple[GroupDelta, ...] = ()


def check_correspondence(a: Scene, b: Scene, c: Correspondence) -> None:
    a_ids, b_ids = set(a.ids()), set(b.ids())
    src, tgt = c.source_ids(), c.target_ids()
    for i in src:
        if i not in a_ids:
            raise CorrespondenceError(f"unknown source element {i!r} in scene {a.id!r}")
    for i in tgt:
        if i not in b_ids:
            raise CorrespondenceError(f"unknown target element {i!r} in scene {b.id!r}")
    if len(set(src)) != len(src) or len(set(tgt)) != len(tgt):
        raise CorrespondenceError("correspondence is not injective")


def group_delta(
    a: Scene, b: Scene, g: Group, tol: Tolerances = DEFAULT_TOLERANCES
) -> GroupDelta:
    changed = set()
    for s in g.sources:
        for t in g.targets:
            changed |= changed_channels(a.element(s).variables, b.element(t).variables, tol)
    if len(g.sources) != len(g.targets):
        changed.add("count")
    changed_f = frozenset(changed)
    return GroupDelta(g, changed_f, frozenset(GROUP_CHANNELS) - changed_f)


def scene_diff(
    a: Scene, b: Scene, c: Correspondence, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> SceneDelta:
    check_correspondence(a, b, c)
    matched = tuple(
        variable_delta(a.element(p.source), b.element(p.target), tolerances)
        for p in c.pairs
    )
    groups = tuple(group_delta(a, b, g, tolerances) for g in c.groups)
    used_a, used_b = set(c.source_ids()), set(c.target_ids())
    return SceneDelta(
        matched=matched,
        exited=tuple(i for i in a.ids() if i not in used_a),
        entered=tuple(i for i in b.ids() if i not in used_b),
        camera_delta=camera_delta(a.camera, b.camera),
        groups=groups,
    )


def identity_correspondence(a: Scene, ids: Optional[Iterable[str]] = None) -> Correspondence:
    ids = a.ids() if ids is None else ids
    return Correspondence(tuple(Pair(i, i, "inferred") for i in ids))
