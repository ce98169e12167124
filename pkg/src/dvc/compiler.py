"""Plan a clip's declared transitions as a staged keyframe timeline.

The planner works in three steps. `correspond` pairs source and target
elements. `plan_transition` decides which pairs each declared transition may
carry (pairs it cannot carry are demoted to an exit plus an entry), picks the
stage schedule, and emits per-actor channel tracks plus a camera track.
`render.sample` evaluates the result at any normalized time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .charts import expand_scene
from .easing import ease
from .geometry import Geometry, align_cyclic, bounding_radius, circle, resample
from .model import (
    CHANNELS,
    CameraPose,
    Correspondence,
    Group,
    Pair,
    Scene,
    VisualElement,
    angle_between,
    changed_channels,
    check_correspondence,
    shape_changed,
)
from .speclang.document import ClipSpec, TransitionEntry, VideoSpec
from .taxonomy import CAMERA_MOTION, HALFTIME, NARRATIVE_AGENT, PRESERVING_GUIDE, REFRESH

MATCH_THRESHOLD = 0.5
WEIGHTS = {"shape": 4.0, "color": 2.0, "size": 1.0, "position": 1.0}
POSITION_SCALE = 1000.0
EXIT_END = 0.3
ENTER_START = 0.7
DEFAULT_VIEWPORT = (960, 540)
WIPE_DIRECTIONS = ("left_to_right", "right_to_left", "top_to_bottom", "bottom_to_top")
INF = math.inf


class PlanError(ValueError):
    code = "plan-error"


class PlanConflict(PlanError):
    code = "plan-conflict"


# ---------------------------------------------------------------- correspondence


def match_distance(x: VisualElement, y: VisualElement) -> float:
    a, b = x.variables, y.variables
    d = 0.0
    if shape_changed(a.shape, b.shape, 1e-6):
        d += WEIGHTS["shape"]
    if a.color != b.color:
        d += WEIGHTS["color"]
    big = max(a.extent, b.extent)
    if big > 0:
        d += WEIGHTS["size"] * min(1.0, abs(a.extent - b.extent) / big)
    d += WEIGHTS["position"] * min(1.0, math.dist(a.position, b.position) / POSITION_SCALE)
    return d


def correspond(
    a: Scene,
    b: Scene,
    explicit: Sequence[Tuple[Sequence[str], Sequence[str]]] = (),
) -> Correspondence:
    """Explicit maps verbatim, then greedy same-kind matching in source order.

    A 1->1 map becomes a Pair; many->1 and 1->many maps become Groups.
    """
    pairs: List[Pair] = []
    groups: List[Group] = []
    for sources, targets in explicit:
        sources, targets = tuple(sources), tuple(targets)
        if len(sources) == 1 and len(targets) == 1:
            pairs.append(Pair(sources[0], targets[0], "explicit"))
        else:
            groups.append(Group(sources, targets))
    c = Correspondence(tuple(pairs), tuple(groups))
    check_correspondence(a, b, c)
    used_a, used_b = set(c.source_ids()), set(c.target_ids())
    free_b = [y for y in b.elements if y.id not in used_b]
    for x in a.elements:
        if x.id in used_a:
            continue
        best, best_d = None, MATCH_THRESHOLD
        for y in free_b:
            if y.kind != x.kind:
                continue
            d = match_distance(x, y)
            if d < best_d:
                best, best_d = y, d
        if best is not None:
            pairs.append(Pair(x.id, best.id, "inferred"))
            free_b.remove(best)
    return Correspondence(tuple(pairs), tuple(groups))


def clip_maps(clip: ClipSpec) -> List[Tuple[Tuple[str, ...], Tuple[str, ...]]]:
    """Explicit maps plus the item/background pair named by expanding or shrinking guides."""
    maps = list(clip.maps)
    mapped_a = {s for src, _ in maps for s in src}
    for t in clip.transitions:
        sub = t.type.subtype
        item, bg = t.param("item"), t.param("background")
        if sub not in ("expanding_guide", "shrinking_guide") or item is None or bg is None:
            continue
        pair = ((item,), (bg,)) if sub == "expanding_guide" else ((bg,), (item,))
        if pair not in maps and pair[0][0] not in mapped_a:
            maps.append(pair)
            mapped_a.add(pair[0][0])
    return maps


# ---------------------------------------------------------------- timeline types


@dataclass(frozen=True)
class Keyframe:
    t: float
    value: object
    easing: str = "linear"  # easing of the segment that starts here


@lru_cache(maxsize=2048)
def _morph_outlines(g0: Geometry, g1: Geometry):
    p0, p1 = resample(g0), resample(g1)
    if g0.closed:
        p1 = align_cyclic(p0, p1)
    return p0, p1


def _lerp(a: float, b: float, e: float) -> float:
    return a + (b - a) * e


def interpolate(channel: str, v0, v1, e: float):
    if e <= 0.0:
        return v0
    if e >= 1.0:
        return v1
    if channel in ("size", "opacity", "zoom", "focus"):
        return _lerp(v0, v1, e)
    if channel == "orientation":
        d = (v1 - v0) % 360.0
        if d > 180.0:
            d -= 360.0
        return (v0 + d * e) % 360.0
    if channel in ("position", "color", "clip"):
        return tuple(_lerp(x, y, e) for x, y in zip(v0, v1))
    if channel == "shape":
        p0, p1 = _morph_outlines(v0, v1)
        pts = tuple((_lerp(x0, x1, e), _lerp(y0, y1, e)) for (x0, y0), (x1, y1) in zip(p0, p1))
        return Geometry("polygon" if v0.closed else "polyline", vertices=pts)
    raise ValueError(f"unknown channel {channel!r}")


@dataclass(frozen=True)
class Track:
    channel: str
    keys: Tuple[Keyframe, ...]

    def __post_init__(self) -> None:
        times = [k.t for k in self.keys]
        if not self.keys or times != sorted(times) or times[0] < 0 or times[-1] > 1:
            raise PlanError(f"{self.channel} track keys must be ordered inside [0, 1]")

    @property
    def span(self) -> Tuple[float, float]:
        return self.keys[0].t, self.keys[-1].t

    def value_at(self, t: float):
        keys = self.keys
        if t <= keys[0].t:
            return keys[0].value
        for k0, k1 in zip(keys, keys[1:]):
            if t < k1.t:
                u = (t - k0.t) / (k1.t - k0.t)
                return interpolate(self.channel, k0.value, k1.value, ease(k0.easing, u))
            if t == k1.t:
                return k1.value
        return keys[-1].value


def ramp(channel: str, t0: float, v0, t1: float, v1, easing: str) -> Track:
    return Track(channel, (Keyframe(t0, v0, easing), Keyframe(t1, v1)))


@dataclass(frozen=True)
class Window:
    """Visibility interval; `lo_open` / `hi_open` exclude the endpoint."""

    lo: float = 0.0
    hi: float = INF
    lo_open: bool = False
    hi_open: bool = False

    def contains(self, t: float) -> bool:
        above = t > self.lo if self.lo_open else t >= self.lo
        below = t < self.hi if self.hi_open else t <= self.hi
        return above and below


ALWAYS = Window()


@dataclass(frozen=True)
class Actor:
    """One drawable over the clip: a kept pair, an exit, an entry or a group member."""

    key: str
    role: str  # pair | exit | enter | group_source | group_target | item | background
    base: VisualElement  # untracked attributes come from here
    final: Optional[VisualElement]  # exact element at t = 1
    window: Window = ALWAYS
    tracks: Tuple[Track, ...] = ()
    src_index: Optional[int] = None
    tgt_index: Optional[int] = None
    on_top: bool = False

    def track(self, channel: str) -> Optional[Track]:
        for tr in self.tracks:
            if tr.channel == channel:
                return tr
        return None


@dataclass(frozen=True)
class Stage:
    name: str
    lo: float
    hi: float


@dataclass(frozen=True)
class CameraTrack:
    keys: Tuple[Tuple[float, CameraPose], ...]
    mode: str = "smooth"  # smooth | step | dolly
    easing: str = "ease_in_out"
    focus_point: Optional[Tuple[float, float]] = None

    def pose_at(self, t: float) -> CameraPose:
        keys = self.keys
        if t <= keys[0][0]:
            return keys[0][1]
        if t >= keys[-1][0]:
            return keys[-1][1]
        if self.mode == "step":
            pose = keys[0][1]
            for kt, kp in keys:
                if kt <= t:
                    pose = kp
            return pose
        for (t0, p0), (t1, p1) in zip(keys, keys[1:]):
            if t == t1:
                return p1
            if t < t1:
                e = ease(self.easing, (t - t0) / (t1 - t0))
                zoom = _lerp(p0.zoom, p1.zoom, e)
                focus = _lerp(p0.focus_depth, p1.focus_depth, e)
                if self.mode == "dolly" and self.focus_point is not None:
                    px, py = self.focus_point
                    r0, r1 = p0.zoom / zoom, p0.zoom / p1.zoom
                    # hold the focus point's screen position, then correct toward p1
                    cx = px - (px - p0.center[0]) * r0
                    cy = py - (py - p0.center[1]) * r0
                    ex = p1.center[0] - (px - (px - p0.center[0]) * r1)
                    ey = p1.center[1] - (py - (py - p0.center[1]) * r1)
                    center = (cx + ex * e, cy + ey * e)
                else:
                    center = interpolate("position", p0.center, p1.center, e)
                return CameraPose(center, zoom, focus)
        return keys[-1][1]


@dataclass(frozen=True)
class Timeline:
    clip: ClipSpec
    source: Scene
    target: Scene
    correspondence: Correspondence
    duration: float
    stages: Tuple[Stage, ...]
    actors: Tuple[Actor, ...]
    camera: CameraTrack
    interstitial: Optional[Tuple[Scene, float, float]] = None
    # camera axes whose motion keeps a focus element steady (tilt, pan, dolly)
    focus_locks: FrozenSet[str] = frozenset()
    wipe: Optional[str] = None
    fade: bool = False
    discontinuities: Tuple[float, ...] = ()

    @property
    def types(self):
        return self.clip.types

    def stage(self, name: str) -> Optional[Stage]:
        for s in self.stages:
            if s.name == name:
                return s
        return None

    def tracks(self) -> List[Tuple[str, Track]]:
        return [(a.key, tr) for a in self.actors for tr in a.tracks]

    def camera_at(self, t: float) -> CameraPose:
        if self.interstitial is not None:
            scene, lo, hi = self.interstitial
            if lo <= t <= hi:
                return scene.camera
        return self.camera.pose_at(t)


# ---------------------------------------------------------------- ownership rules

APPEARANCE = frozenset({"position", "size", "color", "shape", "orientation"})
ALL = frozenset(CHANNELS)

# channels an element transition may animate on a pair it carries
PAIR_CLAIMS = {
    "rst_guide": frozenset({"position", "size", "orientation", "opacity"}),
    "staying_guide": frozenset(),
    "updating_content": frozenset(),
    "scaling": frozenset({"size"}),
    "morphing": frozenset({"shape", "size", "color", "orientation", "opacity"}),
    "expanding_guide": ALL,
    "shrinking_guide": ALL,
}

# camera axes each camera subtype moves; overlapping claims conflict
CAMERA_CLAIMS = {
    "pedestal": frozenset({"center_y"}),
    "tilt": frozenset({"center_y"}),
    "truck": frozenset({"center_x"}),
    "pan": frozenset({"center_x"}),
    "zoom": frozenset({"zoom", "center_x", "center_y"}),
    "dolly": frozenset({"zoom", "center_x", "center_y"}),
    "rack_focus": frozenset({"focus"}),
}
CAMERA_REQUIRED = {
    "pedestal": "center_y", "tilt": "center_y", "truck": "center_x", "pan": "center_x",
    "zoom": "zoom", "dolly": "zoom", "rack_focus": "focus",
}
FOCUS_LOCK_AXES = {"tilt": "center_y", "pan": "center_x", "dolly": "zoom"}


def _bound(el: VisualElement) -> bool:
    return el.data_binding is not None


def _accepts(sub: str, changed: FrozenSet[str], x: VisualElement, y: VisualElement) -> bool:
    if sub == "rst_guide":
        return not changed & {"shape", "color"}
    if sub == "staying_guide":
        return not changed & APPEARANCE
    if sub == "updating_content":
        return not changed & {"shape", "position", "color"}
    if sub == "scaling":
        return (_bound(x) or _bound(y)) and not changed & {"position", "color", "shape", "orientation"}
    if sub == "morphing":
        return "shape" in changed and "position" not in changed
    return False


# ---------------------------------------------------------------- planning


def _schedule(has_exit: bool, has_enter: bool) -> Tuple[Stage, ...]:
    lo = EXIT_END if has_exit else 0.0
    hi = ENTER_START if has_enter else 1.0
    stages = []
    if has_exit:
        stages.append(Stage("exit", 0.0, EXIT_END))
    stages.append(Stage("transform", lo, hi))
    if has_enter:
        stages.append(Stage("enter", ENTER_START, 1.0))
    return tuple(stages)


def _cover_radius(pos, camera: CameraPose, viewport) -> float:
    w, h = viewport
    k = camera.zoom * min(w, h) / 1000.0
    hw, hh = w / 2 / k, h / 2 / k
    cx, cy = camera.center
    corners = [(cx + sx * hw, cy + sy * hh) for sx in (-1, 1) for sy in (-1, 1)]
    return max(math.dist(pos, c) for c in corners) * 1.05


class _Planner:
    def __init__(self, clip: ClipSpec, a: Scene, b: Scene, c: Correspondence,
                 interstitial: Optional[Scene], viewport):
        self.clip, self.a, self.b, self.c = clip, a, b, c
        self.interstitial = interstitial
        self.viewport = viewport
        self.a_index = {el.id: i for i, el in enumerate(a.elements)}
        self.b_index = {el.id: i for i, el in enumerate(b.elements)}
        entries = clip.transitions
        self.camera_entries = [e for e in entries if e.type.category == CAMERA_MOTION]
        self.element_entries = [e for e in entries if e.type.category in
                                (PRESERVING_GUIDE, NARRATIVE_AGENT)]
        self.whole_entries = [e for e in entries if e.type.category in (REFRESH, HALFTIME)]
        self.primary = entries[0]

    # -- helpers

    def sub_entry(self, sub: str) -> Optional[TransitionEntry]:
        return self.clip.entry(sub)

    def exit_actor(self, el: VisualElement, window: Window, tracks=()) -> Actor:
        return Actor("a:" + el.id, "exit", el, None, window, tuple(tracks),
                     src_index=self.a_index[el.id])

    def enter_actor(self, el: VisualElement, window: Window, tracks=()) -> Actor:
        return Actor("b:" + el.id, "enter", el, el, window, tuple(tracks),
                     tgt_index=self.b_index[el.id])

    def camera_track(self, default_mode="smooth") -> CameraTrack:
        p0, p1 = self.a.camera, self.b.camera
        keys = [(0.0, p0)] + [(t, p) for t, p in self.clip.camera_path if 0 < t < 1] + [(1.0, p1)]
        easing = self.camera_entries[0].easing if self.camera_entries else self.primary.easing
        return CameraTrack(tuple(keys), default_mode, easing)

    # -- whole-scene transitions

    def plan_whole(self) -> Timeline:
        if len(self.clip.transitions) > 1:
            names = ", ".join(t.type.name for t in self.clip.transitions)
            raise PlanConflict(f"{self.whole_entries[0].type.name} replaces the whole scene "
                               f"and cannot be combined ({names})")
        entry = self.whole_entries[0]
        a, b, e = self.a, self.b, entry.easing
        actors: List[Actor] = []
        step_cam = CameraTrack(((0.0, a.camera), (0.5, b.camera), (1.0, b.camera)), "step")
        if entry.type.category == HALFTIME:
            if self.interstitial is None:
                raise PlanError("halftime needs an interstitial scene")
            for el in a.elements:
                op = el.variables.opacity
                actors.append(self.exit_actor(el, Window(0.0, 0.25, hi_open=True),
                                              [ramp("opacity", 0.0, op, 0.25, 0.0, e)]))
            for el in b.elements:
                op = el.variables.opacity
                actors.append(self.enter_actor(el, Window(0.75, INF, lo_open=True),
                                               [ramp("opacity", 0.75, 0.0, 1.0, op, e)]))
            stages = (Stage("exit", 0.0, 0.25), Stage("transform", 0.25, 0.75),
                      Stage("enter", 0.75, 1.0))
            return self.timeline(stages, actors, step_cam, Correspondence(),
                                 interstitial=(self.interstitial, 0.25, 0.75))
        sub = entry.type.subtype
        if sub == "hard_cut":
            actors += [self.exit_actor(el, Window(0.0, 0.5, hi_open=True)) for el in a.elements]
            actors += [self.enter_actor(el, Window(0.5, INF)) for el in b.elements]
            stages = (Stage("exit", 0.0, 0.5), Stage("enter", 0.5, 1.0))
            return self.timeline(stages, actors, step_cam, Correspondence(), discontinuities=(0.5,))
        if sub == "fade":
            for el in a.elements:
                actors.append(self.exit_actor(el, Window(0.0, 0.5, hi_open=True),
                                              [ramp("opacity", 0.0, el.variables.opacity, 0.5, 0.0, e)]))
            for el in b.elements:
                actors.append(self.enter_actor(el, Window(0.5, INF, lo_open=True),
                                               [ramp("opacity", 0.5, 0.0, 1.0, el.variables.opacity, e)]))
            stages = (Stage("exit", 0.0, 0.5), Stage("enter", 0.5, 1.0))
            return self.timeline(stages, actors, step_cam, Correspondence(), fade=True)
        # wipe: a screen-aligned boundary sweeps across the viewport
        direction = entry.param("direction", "left_to_right")
        if direction not in WIPE_DIRECTIONS:
            raise PlanError(f"unknown wipe direction {direction!r}")
        full = (0.0, 0.0, 1.0, 1.0)
        src_end, tgt_start = {
            "left_to_right": ((1.0, 0.0, 1.0, 1.0), (0.0, 0.0, 0.0, 1.0)),
            "right_to_left": ((0.0, 0.0, 0.0, 1.0), (1.0, 0.0, 1.0, 1.0)),
            "top_to_bottom": ((0.0, 1.0, 1.0, 1.0), (0.0, 0.0, 1.0, 0.0)),
            "bottom_to_top": ((0.0, 0.0, 1.0, 0.0), (0.0, 1.0, 1.0, 1.0)),
        }[direction]
        for el in a.elements:
            actors.append(self.exit_actor(el, Window(0.0, 1.0, hi_open=True),
                                          [ramp("clip", 0.0, full, 1.0, src_end, e)]))
        for el in b.elements:
            actors.append(self.enter_actor(el, Window(0.0, INF, lo_open=True),
                                           [ramp("clip", 0.0, tgt_start, 1.0, full, e)]))
        return self.timeline((Stage("transform", 0.0, 1.0),), actors, step_cam,
                             Correspondence(), wipe=direction)

    # -- camera checks

    def check_camera(self) -> FrozenSet[str]:
        moved = set()
        p0, p1 = self.a.camera, self.b.camera
        for _, p in list(self.clip.camera_path) + [(1.0, p1)]:
            d = (p.center[0] - p0.center[0], p.center[1] - p0.center[1],
                 p.zoom - p0.zoom, p.focus_depth - p0.focus_depth)
            for name, v in zip(("center_x", "center_y", "zoom", "focus"), d):
                if abs(v) > 1e-9:
                    moved.add(name)
        claimed: Dict[str, str] = {}
        for entry in self.camera_entries:
            sub = entry.type.subtype
            for axis in CAMERA_CLAIMS[sub]:
                if axis in claimed:
                    raise PlanConflict(f"camera axis {axis} is claimed by both "
                                       f"{claimed[axis]} and {sub}")
                claimed[axis] = sub
        end_moved = camera_axes(p0, p1)
        for entry in self.camera_entries:
            sub = entry.type.subtype
            if CAMERA_REQUIRED[sub] not in end_moved:
                raise PlanError(f"{sub} needs the scenes' cameras to differ in "
                                f"{CAMERA_REQUIRED[sub]}")
        stray = moved - set(claimed)
        if stray:
            raise PlanError("camera moves along " + ", ".join(sorted(stray)) +
                            " without a camera transition that claims it")
        return frozenset(FOCUS_LOCK_AXES[e.type.subtype] for e in self.camera_entries
                         if e.type.subtype in FOCUS_LOCK_AXES)

    # -- element transitions

    def plan(self) -> Timeline:
        if self.whole_entries:
            return self.plan_whole()
        locks = self.check_camera()
        a, b = self.a, self.b
        subs = [e.type.subtype for e in self.element_entries]
        special = {}
        for e in self.element_entries:
            if e.type.subtype == "expanding_guide":
                special[(e.param("item"), e.param("background"))] = e
            elif e.type.subtype == "shrinking_guide":
                special[(e.param("background"), e.param("item"))] = e

        kept: List[Tuple[Pair, Optional[TransitionEntry], FrozenSet[str]]] = []
        for p in self.c.pairs:
            x, y = a.element(p.source), b.element(p.target)
            changed = changed_channels(x.variables, y.variables)
            if (p.source, p.target) in special:
                entry = special[(p.source, p.target)]
                if x.variables.color != y.variables.color:
                    raise PlanError(f"{entry.type.subtype} needs {p.source} and {p.target} "
                                    "to share one color")
                kept.append((p, entry, changed))
                continue
            if not changed:
                kept.append((p, None, changed))
                continue
            owners = [e for e in self.element_entries
                      if e.type.subtype in PAIR_CLAIMS
                      and e.type.subtype not in ("expanding_guide", "shrinking_guide")
                      and changed <= PAIR_CLAIMS[e.type.subtype]
                      and _accepts(e.type.subtype, changed, x, y)]
            if len(owners) > 1:
                raise PlanConflict(
                    f"{', '.join(sorted(changed))} of {p.source} is claimed by both "
                    f"{owners[0].type.subtype} and {owners[1].type.subtype}")
            if owners:
                if owners[0].type.subtype == "morphing" and x.variables.shape.closed != \
                        y.variables.shape.closed:
                    raise PlanError(f"cannot morph {p.source}: one outline is open, the other closed")
                kept.append((p, owners[0], changed))

        groups = []
        for g in self.c.groups:
            entry = self.sub_entry("merging") if g.is_merge else \
                self.sub_entry("splitting") if g.is_split else None
            if entry is None:
                continue
            colors = {a.element(s).variables.color for s in g.sources} | \
                {b.element(t).variables.color for t in g.targets}
            if len(colors) > 1:
                raise PlanError(f"{entry.type.subtype} needs every member of "
                                f"{'+'.join(g.sources)} -> {'+'.join(g.targets)} to share one color")
            groups.append((g, entry))

        eff = Correspondence(tuple(p for p, _, _ in kept), tuple(g for g, _ in groups))
        used_a, used_b = set(eff.source_ids()), set(eff.target_ids())
        exits = [el for el in a.elements if el.id not in used_a]
        entries = [el for el in b.elements if el.id not in used_b]

        staggered = "updating_content" in subs
        if staggered:
            stages = _schedule(False, False)
        else:
            stages = _schedule(bool(exits), bool(entries))
        tr = next(s for s in stages if s.name == "transform")
        s0, s1 = tr.lo, tr.hi
        easing = self.element_entries[0].easing if self.element_entries else self.primary.easing
        actors: List[Actor] = []

        # exits and entries
        if staggered:
            n = len(exits) + len(entries)
            d = (s1 - s0) / (n + 1) if n else 0.0
            k = 0
            for el in exits:
                lo, hi = s0 + k * d, s0 + (k + 2) * d
                actors.append(self.exit_actor(el, Window(0.0, hi, hi_open=True),
                                              [ramp("opacity", lo, el.variables.opacity, hi, 0.0, easing)]))
                k += 1
            for el in entries:
                lo, hi = s0 + k * d, s0 + (k + 2) * d
                actors.append(self.enter_actor(el, Window(lo, INF, lo_open=True),
                                               [ramp("opacity", lo, 0.0, hi, el.variables.opacity, easing)]))
                k += 1
        else:
            for el in exits:
                actors.append(self.exit_actor(el, Window(0.0, EXIT_END, hi_open=True),
                                              [ramp("opacity", 0.0, el.variables.opacity, EXIT_END, 0.0, easing)]))
            for el in entries:
                actors.append(self.enter_actor(el, Window(ENTER_START, INF, lo_open=True),
                                               [ramp("opacity", ENTER_START, 0.0, 1.0,
                                                     el.variables.opacity, easing)]))

        # kept pairs
        for p, entry, changed in kept:
            x, y = a.element(p.source), b.element(p.target)
            sub = entry.type.subtype if entry else None
            e = entry.easing if entry else easing
            if sub in ("expanding_guide", "shrinking_guide"):
                actors += self.guide_actors(sub, x, y, s0, s1, e)
                continue
            tracks = []
            # every differing raw value gets a track so t = 1 lands exactly on the target
            for ch in CHANNELS:
                v0, v1 = getattr(x.variables, ch), getattr(y.variables, ch)
                if v0 != v1:
                    tracks.append(ramp(ch, s0, v0, s1, v1, e))
            actors.append(Actor("p:" + p.source, "pair", x, y, ALWAYS, tuple(tracks),
                                self.a_index[p.source], self.b_index[p.target]))

        # merge and split groups
        for g, entry in groups:
            e = entry.easing
            if g.is_merge:
                tgt = b.element(g.targets[0])
                anchor = tgt.variables.position
                for sid in g.sources:
                    x = a.element(sid)
                    actors.append(Actor("g:" + sid, "group_source", x, None,
                                        Window(0.0, s1, hi_open=True),
                                        (ramp("position", s0, x.variables.position, s1, anchor, e),),
                                        src_index=self.a_index[sid]))
                actors.append(Actor("g:" + tgt.id, "group_target", tgt, tgt, Window(s1, INF),
                                    tgt_index=self.b_index[tgt.id]))
            else:
                src = a.element(g.sources[0])
                anchor = src.variables.position
                actors.append(Actor("g:" + src.id, "group_source", src, None, Window(0.0, s0),
                                    src_index=self.a_index[src.id]))
                for tid in g.targets:
                    y = b.element(tid)
                    actors.append(Actor("g:" + tid, "group_target", y, y,
                                        Window(s0, INF, lo_open=True),
                                        (ramp("position", s0, anchor, s1, y.variables.position, e),),
                                        tgt_index=self.b_index[tid]))

        camera = self.camera_track()
        dolly = self.sub_entry("dolly")
        if dolly is not None:
            focus = dolly.param("focus")
            if focus is None or focus not in self.a_index:
                raise PlanError("dolly needs focus= naming an element of the source scene")
            camera = CameraTrack(camera.keys, "dolly", dolly.easing,
                                 a.element(focus).variables.position)
        for sub in ("tilt", "pan"):
            entry = self.sub_entry(sub)
            if entry is not None and (entry.param("focus") is None or
                                      entry.param("focus") not in self.a_index):
                raise PlanError(f"{sub} needs focus= naming an element of the source scene")
        if camera.keys[0][1] == camera.keys[-1][1] and len(camera.keys) == 2:
            camera = CameraTrack(((0.0, a.camera),), "step")
        return self.timeline(stages, actors, camera, eff, focus_locks=locks)

    def guide_actors(self, sub, x, y, s0, s1, e) -> List[Actor]:
        if sub == "expanding_guide":
            item, bg = x, y
            cam = self.a.camera
        else:
            item, bg = y, x
            cam = self.b.camera
        g = item.variables.shape
        if not g.closed:
            raise PlanError(f"{sub} needs a closed item outline, {item.id} is open")
        r = _cover_radius(item.variables.position, cam, self.viewport)
        big = circle(r / max(item.variables.size, 1e-9))
        if sub == "expanding_guide":
            grow = ramp("shape", s0, g, s1, big, e)
            return [
                Actor("x:" + item.id, "item", item, None, Window(0.0, s1, hi_open=True), (grow,),
                      src_index=self.a_index[item.id], on_top=True),
                Actor("x:" + bg.id, "background", bg, bg, Window(s1, INF),
                      tgt_index=self.b_index[bg.id]),
            ]
        shrink = ramp("shape", s0, big, s1, g, e)
        return [
            Actor("x:" + bg.id, "background", bg, None, Window(0.0, s0), src_index=self.a_index[bg.id]),
            Actor("x:" + item.id, "item", item, item, Window(s0, INF, lo_open=True), (shrink,),
                  tgt_index=self.b_index[item.id], on_top=True),
        ]

    def timeline(self, stages, actors, camera, eff, **kw) -> Timeline:
        return Timeline(self.clip, self.a, self.b, eff, self.clip.duration, tuple(stages),
                        tuple(actors), camera, **kw)


def camera_axes(p0: CameraPose, p1: CameraPose, eps: float = 1e-9) -> FrozenSet[str]:
    d = (p1.center[0] - p0.center[0], p1.center[1] - p0.center[1],
         p1.zoom - p0.zoom, p1.focus_depth - p0.focus_depth)
    return frozenset(n for n, v in zip(("center_x", "center_y", "zoom", "focus"), d) if abs(v) > eps)


def plan_transition(
    clip: ClipSpec,
    a: Scene,
    b: Scene,
    c: Correspondence,
    interstitial: Optional[Scene] = None,
    viewport: Tuple[int, int] = DEFAULT_VIEWPORT,
) -> Timeline:
    """Timeline realizing every transition declared on `clip` between `a` and `b`.

    Raises PlanConflict when two transitions claim one channel and PlanError
    when the scenes cannot realize a declared transition.
    """
    check_correspondence(a, b, c)
    return _Planner(clip, a, b, c, interstitial, viewport).plan()


def plan_clip(spec: VideoSpec, index: int, scenes: Optional[Dict[str, Scene]] = None) -> Timeline:
    """Lay out, correspond and plan clip `index` of a parsed spec."""
    clip = spec.clips[index]
    if scenes is None:
        data = spec.dataset_map()
        scenes = {s.id: expand_scene(s, data) for s in spec.scenes}
    a, b = scenes[clip.source], scenes[clip.target]
    c = correspond(a, b, clip_maps(clip))
    inter = scenes[clip.halftime_scene] if clip.halftime_scene else None
    return plan_transition(clip, a, b, c, inter, (spec.width, spec.height))


def plan_video(spec: VideoSpec) -> List[Timeline]:
    data = spec.dataset_map()
    scenes = {s.id: expand_scene(s, data) for s in spec.scenes}
    return [plan_clip(spec, i, scenes) for i in range(len(spec.clips))]
