"""Closed vocabulary of narrative transitions and their variable contracts."""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Tuple

from .model import CHANNELS, SceneDelta

REFRESH = "refresh"
HALFTIME = "halftime"
CAMERA_MOTION = "camera_motion"
PRESERVING_GUIDE = "preserving_guide"
NARRATIVE_AGENT = "narrative_agent"

CATEGORIES = (REFRESH, HALFTIME, CAMERA_MOTION, PRESERVING_GUIDE, NARRATIVE_AGENT)

SUBTYPES = {
    REFRESH: ("hard_cut", "fade", "wipe"),
    HALFTIME: (),
    CAMERA_MOTION: ("pedestal", "truck", "tilt", "pan", "dolly", "zoom", "rack_focus"),
    PRESERVING_GUIDE: ("rst_guide", "expanding_guide", "shrinking_guide", "staying_guide"),
    NARRATIVE_AGENT: ("updating_content", "scaling", "morphing", "merging", "splitting"),
}

CATEGORY_TITLES = {
    REFRESH: "Refresh",
    HALFTIME: "Halftime",
    CAMERA_MOTION: "Camera Motion",
    PRESERVING_GUIDE: "Preserving Guide",
    NARRATIVE_AGENT: "Narrative Agent",
}


@dataclass(frozen=True, order=True)
class TransitionType:
    category: str
    subtype: Optional[str] = None

    def __post_init__(self) -> None:
        if self.category not in SUBTYPES:
            raise ValueError(f"unknown transition category {self.category!r}")
        allowed = SUBTYPES[self.category]
        if self.subtype is None:
            return
        if self.subtype not in allowed:
            raise ValueError(f"{self.subtype!r} is not a {self.category} subtype")

    @property
    def name(self) -> str:
        if self.subtype is None:
            return self.category
        return f"{self.category}.{self.subtype}"

    @property
    def concrete(self) -> bool:
        return self.subtype is not None or self.category == HALFTIME

    def __str__(self) -> str:
        return self.name


def all_types() -> Tuple[TransitionType, ...]:
    """The 20 concrete transition types in declaration order."""
    out = []
    for cat in CATEGORIES:
        if not SUBTYPES[cat]:
            out.append(TransitionType(cat))
        for sub in SUBTYPES[cat]:
            out.append(TransitionType(cat, sub))
    return tuple(out)


ALL_TYPES = all_types()
CANONICAL_NAMES = {t.name: t for t in ALL_TYPES}
DECLARATION_ORDER = {t: i for i, t in enumerate(ALL_TYPES)}


def lookup(name: str) -> TransitionType:
    try:
        return CANONICAL_NAMES[name]
    except KeyError:
        raise KeyError(f"unknown transition {name!r}") from None


def order_key(t: TransitionType) -> Tuple[int, int]:
    """Taxonomy declaration order; category fallbacks sort after their members."""
    if t in DECLARATION_ORDER:
        return (DECLARATION_ORDER[t], 0)
    last = max(i for u, i in DECLARATION_ORDER.items() if u.category == t.category)
    return (last, 1)


# scopes
GUIDED = "guided-elements"
AGENT = "agent-elements"
WHOLE = "whole-scene"
CAMERA_ONLY = "camera-only"

LAYOUT = frozenset({"position", "size", "orientation"})
APPEARANCE = frozenset({"position", "size", "color", "shape", "orientation"})
ELEMENT_CHANNELS = frozenset(CHANNELS)


@dataclass(frozen=True)
class VariableContract:
    must_change: FrozenSet[str]
    must_preserve: FrozenSet[str]
    scope: str
    # at least one of these must change (rst guide layout)
    change_any: FrozenSet[str] = frozenset()
    # camera pose axes the transition must / must not move
    camera_change: FrozenSet[str] = frozenset()
    camera_preserve: FrozenSet[str] = frozenset()
    interstitial: bool = False

    def __post_init__(self) -> None:
        if self.must_change & self.must_preserve:
            raise ValueError("contract channels overlap")


def _c(change=(), preserve=(), scope=GUIDED, **kw) -> VariableContract:
    return VariableContract(frozenset(change), frozenset(preserve), scope, **{
        k: frozenset(v) if k != "interstitial" else v for k, v in kw.items()
    })


CAMERA_AXES = frozenset({"center_x", "center_y", "zoom", "focus"})

_CAMERA_AXES = {
    "pedestal": ({"center_y"}, {"center_x", "zoom", "focus"}),
    "tilt": ({"center_y"}, {"center_x", "zoom", "focus"}),
    "truck": ({"center_x"}, {"center_y", "zoom", "focus"}),
    "pan": ({"center_x"}, {"center_y", "zoom", "focus"}),
    "zoom": ({"zoom"}, {"focus"}),
    "dolly": ({"zoom"}, {"focus"}),
    "rack_focus": ({"focus"}, {"center_x", "center_y", "zoom"}),
}

_CONTRACTS = {
    "hard_cut": _c(scope=WHOLE),
    "fade": _c(scope=WHOLE),
    "wipe": _c(scope=WHOLE),
    HALFTIME: _c(scope=WHOLE, interstitial=True),
    "rst_guide": _c(preserve={"shape", "color"}, change_any=LAYOUT),
    "expanding_guide": _c(change={"size"}, preserve={"color"}),
    "shrinking_guide": _c(change={"size"}, preserve={"color"}),
    "staying_guide": _c(preserve=APPEARANCE),
    "updating_content": _c(change={"count"}, preserve={"shape", "position", "color"}, scope=AGENT),
    "scaling": _c(change={"size"}, preserve={"position", "color", "shape"}, scope=AGENT),
    "morphing": _c(change={"shape"}, preserve={"position"}, scope=AGENT),
    "merging": _c(change={"position", "count"}, preserve={"color"}, scope=AGENT),
    "splitting": _c(change={"position", "count"}, preserve={"color"}, scope=AGENT),
}
for _sub, (_chg, _keep) in _CAMERA_AXES.items():
    _CONTRACTS[_sub] = _c(
        preserve=ELEMENT_CHANNELS, scope=CAMERA_ONLY, camera_change=_chg, camera_preserve=_keep
    )


def contract_of(t: TransitionType) -> VariableContract:
    if t.category == HALFTIME:
        return _CONTRACTS[HALFTIME]
    if t.subtype is None:
        raise ValueError(f"category fallback {t.name!r} has no contract")
    return _CONTRACTS[t.subtype]


@dataclass(frozen=True)
class Violation:
    element: str
    channel: str

    def __str__(self) -> str:
        return f"{self.element}: {self.channel}"


def satisfies(
    delta: SceneDelta, t: TransitionType, *, combined: Iterable[TransitionType] = ()
) -> Tuple[bool, List[Violation]]:
    """Check an observed scene delta against the contract of `t`.

    `combined` lists the other transitions declared on the same clip. Camera
    contracts only pin element-local channels when no element transition
    shares the clip.
    """
    contract = contract_of(t)
    others = [o for o in combined if o != t]
    violations: List[Violation] = []
    if contract.scope == WHOLE:
        return True, violations

    if contract.scope == CAMERA_ONLY:
        moved = delta.camera_delta.axes()
        # axes another declared camera move may legitimately change
        excused = set()
        for o in others:
            if o.category == CAMERA_MOTION:
                oc = contract_of(o)
                excused |= oc.camera_change | (CAMERA_AXES - oc.camera_preserve - {"focus"})
        for axis in sorted(contract.camera_change - moved):
            violations.append(Violation("camera", axis))
        for axis in sorted((contract.camera_preserve - excused) & moved):
            violations.append(Violation("camera", axis))
        if not any(o.category != CAMERA_MOTION for o in others):
            for d in delta.matched:
                for ch in sorted(d.changed & contract.must_preserve):
                    violations.append(Violation(d.source, ch))
        return not violations, violations

    # element scopes: matched pairs plus merge/split groups
    records = [(d.source, d.changed) for d in delta.matched]
    if t.subtype in ("merging", "splitting"):
        want_merge = t.subtype == "merging"
        records = [
            ("+".join(g.group.sources), g.changed)
            for g in delta.groups
            if (g.group.is_merge if want_merge else g.group.is_split)
        ]
    elif t.subtype == "updating_content":
        count_changed = bool(delta.exited or delta.entered)
        records = records + [("*", frozenset({"count"}) if count_changed else frozenset())]

    if any(o.category in (PRESERVING_GUIDE, NARRATIVE_AGENT) for o in others):
        # pairs breaking this contract's invariants belong to a co-declared transition
        records = [r for r in records if r[0] == "*" or not (r[1] & contract.must_preserve)]
    for el, changed in records:
        for ch in sorted(changed & contract.must_preserve):
            violations.append(Violation(el, ch))
    for ch in sorted(contract.must_change):
        if not any(ch in changed for _, changed in records):
            violations.append(Violation("*", ch))
    if contract.change_any and not any(changed & contract.change_any for _, changed in records):
        violations.append(Violation("*", "|".join(sorted(contract.change_any))))
    return not violations, violations
