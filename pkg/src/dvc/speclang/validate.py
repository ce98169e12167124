"""Semantic checks on a parsed VideoSpec."""
from __future__ import annotations

from typing import Dict, List, Tuple

from ..charts import LayoutError, expand_scene
from ..model import Scene, changed_channels
from ..taxonomy import CAMERA_MOTION, HALFTIME, REFRESH
from .diagnostics import NO_SPAN, Diagnostic, error, sort_diagnostics, warning
from .document import ClipSpec, VideoSpec

FOCUS_SUBTYPES = ("tilt", "pan", "dolly")


def expanded_scenes(spec: VideoSpec) -> Tuple[Dict[str, Scene], List[Diagnostic]]:
    """Lay out every chart; scenes that fail layout are left out."""
    data = spec.dataset_map()
    out: Dict[str, Scene] = {}
    diags: List[Diagnostic] = []
    for s in spec.scenes:
        try:
            scene = expand_scene(s, data)
        except LayoutError as exc:
            diags.append(error(spec.spans.get(("scene", s.id), NO_SPAN), "layout-error", str(exc)))
            continue
        seen = set()
        dup = False
        for el in scene.elements:
            if el.id in seen:
                diags.append(error(spec.spans.get(("scene", s.id), NO_SPAN), "duplicate-id",
                                   f"laid-out element id {el.id!r} repeats in scene {s.id!r}"))
                dup = True
                break
            seen.add(el.id)
        if not dup:
            out[s.id] = scene
    return out, diags


def _identical_pair(a: Scene, b: Scene):
    for x in a.elements:
        for y in b.elements:
            if x.kind == y.kind and not changed_channels(x.variables, y.variables):
                return x.id, y.id
    return None


def _clip_checks(spec: VideoSpec, i: int, c: ClipSpec, scenes: Dict[str, Scene]) -> List[Diagnostic]:
    span = spec.spans.get(("clip", i), NO_SPAN)
    out: List[Diagnostic] = []
    a, b = scenes.get(c.source), scenes.get(c.target)

    halftimes = [t for t in c.transitions if t.type.category == HALFTIME]
    if len(halftimes) > 1:
        out.append(error(span, "halftime-mismatch", "a clip holds at most one halftime transition"))
    if bool(halftimes) != (c.halftime_scene is not None):
        out.append(error(span, "halftime-mismatch",
                         "a halftime transition and a halftime scene must appear together"))

    names = [t.type.name for t in c.transitions]
    for name in sorted({n for n in names if names.count(n) > 1}):
        out.append(error(span, "plan-conflict", f"transition {name} is declared twice"))

    for j, t in enumerate(c.transitions):
        tspan = spec.spans.get(("transition", i, j), span)
        sub = t.type.subtype
        if sub in ("expanding_guide", "shrinking_guide"):
            item, bg = t.param("item"), t.param("background")
            if item is None or bg is None:
                out.append(error(tspan, "expanding-needs-item",
                                 f"{sub} needs item= and background="))
            elif a is not None and b is not None:
                item_scene, bg_scene = (a, b) if sub == "expanding_guide" else (b, a)
                if item not in item_scene.ids():
                    out.append(error(tspan, "expanding-needs-item",
                                     f"item {item!r} is not in scene {item_scene.id!r}"))
                if bg not in bg_scene.ids() or bg_scene.element(bg).kind != "background":
                    out.append(error(tspan, "expanding-needs-item",
                                     f"{bg!r} is not a background element of scene {bg_scene.id!r}"))
        elif sub == "merging":
            if not any(len(s) >= 2 and len(d) == 1 for s, d in c.maps):
                out.append(error(tspan, "merging-needs-group",
                                 "merging needs a map joining at least 2 sources into 1 target"))
        elif sub == "splitting":
            if not any(len(s) == 1 and len(d) >= 2 for s, d in c.maps):
                out.append(error(tspan, "splitting-needs-group",
                                 "splitting needs a map taking 1 source to at least 2 targets"))
        elif sub == "zoom":
            factor = t.param("factor")
            if factor is not None and not factor > 0:
                out.append(error(tspan, "zoom-factor", f"zoom factor must be positive, got {factor}"))
        if sub in FOCUS_SUBTYPES:
            focus = t.param("focus")
            if focus is None:
                out.append(error(tspan, "focus-required", f"{sub} needs focus=<element id>"))
            elif a is not None and focus not in a.ids():
                out.append(error(tspan, "focus-required",
                                 f"focus element {focus!r} is not in scene {a.id!r}"))

    if a is not None and b is not None:
        for j, (sources, targets) in enumerate(c.maps):
            mspan = spec.spans.get(("map", i, j), span)
            for sid in sources:
                if sid not in a.ids():
                    out.append(error(mspan, "unresolved-reference",
                                     f"map source {sid!r} is not in scene {a.id!r}"))
            for tid in targets:
                if tid not in b.ids():
                    out.append(error(mspan, "unresolved-reference",
                                     f"map target {tid!r} is not in scene {b.id!r}"))
        used = [x for s, d in c.maps for x in s]
        used_t = [x for s, d in c.maps for x in d]
        if len(set(used)) != len(used) or len(set(used_t)) != len(used_t):
            out.append(error(span, "duplicate-id", "an element appears in more than one map"))
        if any(t.type.category == REFRESH for t in c.transitions):
            hit = _identical_pair(a, b)
            if hit is not None:
                out.append(warning(span, "guide-available",
                                   f"{hit[0]!r} renders identically in both scenes; "
                                   f"a preserving guide could carry it across"))
        expanding = {t.param("item") for t in c.transitions
                     if t.type.subtype in ("expanding_guide", "shrinking_guide")}
        for j, (sources, targets) in enumerate(c.maps):
            if len(sources) != 1 or len(targets) != 1 or sources[0] in expanding:
                continue
            if sources[0] in a.ids() and targets[0] in b.ids():
                ka, kb = a.element(sources[0]).kind, b.element(targets[0]).kind
                if ka != kb and targets[0] not in expanding:
                    out.append(warning(spec.spans.get(("map", i, j), span), "kind-mismatch",
                                       f"map pairs a {ka} with a {kb}"))
    if c.camera_path and not any(t.type.category == CAMERA_MOTION for t in c.transitions):
        out.append(error(span, "plan-error", "camera keyframes need a camera motion transition"))
    return out


def validate(spec: VideoSpec) -> List[Diagnostic]:
    scenes, diags = expanded_scenes(spec)
    for s in spec.scenes:
        if s.clip_form == "visualization" and not s.charts and not s.form_ok():
            diags.append(warning(spec.spans.get(("scene", s.id), NO_SPAN), "form-mismatch",
                                 f"scene {s.id!r} is marked visualization but shows no data"))
    for i, c in enumerate(spec.clips):
        if i > 0 and not c.new_segment and spec.clips[i - 1].target != c.source:
            diags.append(error(spec.spans.get(("clip", i), NO_SPAN), "broken-chain",
                               f"clip starts at {c.source!r} but the previous clip ended at "
                               f"{spec.clips[i - 1].target!r}"))
        diags += _clip_checks(spec, i, c, scenes)
    return sort_diagnostics(diags)
