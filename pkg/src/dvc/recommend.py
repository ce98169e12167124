"""Rank candidate transitions for an authoring context.

Each rule ties one facet value (clip form pair, content relation or chart
type) to the transitions that suit it. A candidate's score is the number of
distinct facets with a rule naming it; ties keep taxonomy order. The three
scene-agnostic categories close every list as fallbacks.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .model import VIS_TYPES
from .taxonomy import (
    CAMERA_MOTION,
    HALFTIME,
    REFRESH,
    TransitionType,
    lookup,
    order_key,
)

FORM_PAIRS = ("vis_vis", "vis_nonvis", "nonvis_vis")
RELATIONS = ("question_answer", "whole_part", "progress", "supplement", "contrast", "none")

_FORM_ALIASES = {
    "vis->vis": "vis_vis", "vis-vis": "vis_vis", "vis_vis": "vis_vis",
    "vis->non-vis": "vis_nonvis", "vis-nonvis": "vis_nonvis", "vis_nonvis": "vis_nonvis",
    "vis->nonvis": "vis_nonvis", "vis-others": "vis_nonvis",
    "non-vis->vis": "nonvis_vis", "nonvis->vis": "nonvis_vis", "nonvis-vis": "nonvis_vis",
    "nonvis_vis": "nonvis_vis", "others-vis": "nonvis_vis",
}


def norm_form(value: Optional[str]) -> Optional[str]:
    if value is None:
        return None
    key = value.strip().lower()
    if key not in _FORM_ALIASES:
        raise ValueError(f"unknown clip form pair {value!r}; use one of {', '.join(FORM_PAIRS)}")
    return _FORM_ALIASES[key]


def norm_relation(value: Optional[str]) -> Optional[str]:
    if value is None:
        return None
    key = value.strip().lower().replace("-", "_").replace("&", "_").replace(" ", "_")
    key = {"question_and_answer": "question_answer", "whole_and_part": "whole_part"}.get(key, key)
    if key not in RELATIONS:
        raise ValueError(f"unknown content relation {value!r}; use one of {', '.join(RELATIONS)}")
    return key


def norm_vis(value: Optional[str]) -> Optional[str]:
    if value is None:
        return None
    key = value.strip().lower().replace("-", "_")
    if key not in VIS_TYPES:
        raise ValueError(f"unknown chart type {value!r}")
    return key


@dataclass(frozen=True)
class Context:
    form: Optional[str] = None
    relation: Optional[str] = None
    vis_types: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "form", norm_form(self.form))
        object.__setattr__(self, "relation", norm_relation(self.relation))
        object.__setattr__(self, "vis_types", tuple(sorted({norm_vis(v) for v in self.vis_types if v})))
        if self.form is None and self.relation is None and not self.vis_types:
            raise ValueError("a context needs a form pair, a relation or a chart type")


@dataclass(frozen=True)
class Rule:
    facet: str  # form | relation | vis
    value: str
    subtypes: Tuple[str, ...]
    rationale: str


def _r(facet, values, subtypes, why) -> List[Rule]:
    return [Rule(facet, v, tuple(subtypes), why) for v in values]


RULES: Tuple[Rule, ...] = tuple(
    _r("relation", ["question_answer"], ["rst_guide"],
       "question-answer: carry the element asked about into the answer scene")
    + _r("relation", ["whole_part"], ["merging", "splitting", "zoom", "expanding_guide"],
         "whole-part: group or ungroup items, grow an item's color, or zoom to a part")
    + _r("relation", ["progress", "supplement"],
         ["pedestal", "truck", "rack_focus", "rst_guide", "morphing"],
         "progress/supplement: reveal items in sequence by moving the view or the items")
    + _r("relation", ["contrast"], ["rst_guide", "scaling", "updating_content"],
         "contrast: hold the shared context still and let the compared marks change")
    + _r("form", ["vis_vis"], ["rst_guide", "staying_guide", "updating_content"],
         "chart to chart: reuse marks and axes shared by both charts")
    + _r("form", ["vis_nonvis", "nonvis_vis"],
         ["rst_guide", "expanding_guide", "shrinking_guide", "staying_guide"],
         "chart and non-chart scenes: bridge them with a shared icon, text or color")
    + _r("vis", ["line_chart", "scatter_plot", "bar_chart"], ["rst_guide", "staying_guide"],
         "axis charts: keep axes, legends and labels as guides")
    + _r("vis", ["map"], ["zoom", "pedestal", "truck", "rst_guide", "expanding_guide"],
         "maps: move over regions, reuse region outlines, or grow a region's color")
    + _r("vis", ["pie", "donut", "proportional_area"],
         ["merging", "splitting", "expanding_guide", "scaling", "morphing"],
         "part-to-whole charts: combine, separate, resize or reshape the parts")
    + _r("vis", ["diagram"], ["pedestal", "truck", "zoom", "rst_guide"],
         "diagrams: follow the flow with the camera or move arrows, icons and texts")
    + _r("vis", ["pictograph", "number_icon_text"], ["rst_guide"],
         "icon-based charts: let the icons travel between scenes")
)

FALLBACKS = (
    (TransitionType(REFRESH), "always available: a clean break between unrelated scenes"),
    (TransitionType(HALFTIME), "always available: an interstitial title or pause"),
    (TransitionType(CAMERA_MOTION), "always available: change the viewpoint"),
)

_BY_SUBTYPE: Dict[str, TransitionType] = {}
for _rule in RULES:
    for _s in _rule.subtypes:
        cat = {
            "rst_guide": "preserving_guide", "staying_guide": "preserving_guide",
            "expanding_guide": "preserving_guide", "shrinking_guide": "preserving_guide",
            "updating_content": "narrative_agent", "scaling": "narrative_agent",
            "morphing": "narrative_agent", "merging": "narrative_agent",
            "splitting": "narrative_agent",
        }.get(_s, "camera_motion")
        _BY_SUBTYPE[_s] = lookup(f"{cat}.{_s}")


@dataclass(frozen=True)
class Recommendation:
    transition: TransitionType
    rationale: str
    rank: int
    score: int


def _facet_hits(ctx: Context) -> List[Rule]:
    hits = []
    for rule in RULES:
        if rule.facet == "form" and rule.value == ctx.form:
            hits.append(rule)
        elif rule.facet == "relation" and rule.value == ctx.relation:
            hits.append(rule)
        elif rule.facet == "vis" and rule.value in ctx.vis_types:
            hits.append(rule)
    return hits


def recommend(ctx: Context) -> List[Recommendation]:
    facets: Dict[TransitionType, set] = {}
    reasons: Dict[TransitionType, List[str]] = {}
    for rule in _facet_hits(ctx):
        for sub in rule.subtypes:
            t = _BY_SUBTYPE[sub]
            facets.setdefault(t, set()).add(rule.facet)
            if rule.rationale not in reasons.setdefault(t, []):
                reasons[t].append(rule.rationale)
    ranked = sorted(facets, key=lambda t: (-len(facets[t]), order_key(t)))
    out = [Recommendation(t, "; ".join(reasons[t]), i + 1, len(facets[t]))
           for i, t in enumerate(ranked)]
    for t, why in FALLBACKS:
        out.append(Recommendation(t, why, len(out) + 1, 0))
    return out
