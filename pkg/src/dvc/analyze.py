"""Classify clips into taxonomy labels, tabulate corpora and lint scripts."""
from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from importlib import resources
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .compiler import PlanError, Timeline, clip_maps, correspond, plan_transition
from .model import (
    CameraDelta,
    Correspondence,
    Scene,
    VariableDelta,
    camera_delta,
    scene_diff,
)
from .recommend import Context, recommend
from .speclang.diagnostics import NO_SPAN, Diagnostic, error, info, sort_diagnostics, warning
from .speclang.document import VideoSpec
from .speclang.validate import expanded_scenes
from .taxonomy import (
    APPEARANCE,
    CAMERA_MOTION,
    CATEGORIES,
    CATEGORY_TITLES,
    HALFTIME,
    NARRATIVE_AGENT,
    PRESERVING_GUIDE,
    REFRESH,
    TransitionType,
    lookup,
    order_key,
    satisfies,
)

UNKNOWN = "unknown"


# ---------------------------------------------------------------- observation


@dataclass(frozen=True)
class ObservedClip:
    source: Scene
    target: Scene
    correspondence: Correspondence
    camera_delta: CameraDelta
    interstitial: bool = False
    deltas: Tuple[VariableDelta, ...] = ()
    # camera axes whose motion was declared focus-locked (tilt, pan, dolly)
    focus_locks: FrozenSet[str] = frozenset()
    wipe: bool = False
    opacity_ramp: bool = False


def observe(timeline: Timeline) -> ObservedClip:
    """What a viewer can see of a planned clip: its endpoints plus how it bridged them."""
    a, b = timeline.source, timeline.target
    d = scene_diff(a, b, timeline.correspondence)
    ramps = any(act.track("opacity") is not None for act in timeline.actors)
    return ObservedClip(
        source=a,
        target=b,
        correspondence=timeline.correspondence,
        camera_delta=d.camera_delta,
        interstitial=timeline.interstitial is not None,
        deltas=d.matched,
        focus_locks=timeline.focus_locks,
        wipe=timeline.wipe is not None,
        opacity_ramp=ramps and timeline.wipe is None,
    )


def observe_scenes(a: Scene, b: Scene, c: Correspondence, **flags) -> ObservedClip:
    d = scene_diff(a, b, c)
    return ObservedClip(a, b, c, d.camera_delta, deltas=d.matched, **flags)


# ---------------------------------------------------------------- classification


def _t(name: str) -> TransitionType:
    return lookup(name)


def _bound(el) -> bool:
    return el.data_binding is not None


def classify(obs: ObservedClip) -> FrozenSet[TransitionType]:
    """Every label whose definition the observation meets; empty means unknown."""
    a, b, c = obs.source, obs.target, obs.correspondence
    labels = set()
    linked = not c.empty
    if obs.interstitial:
        labels.add(_t(HALFTIME))

    cd = obs.camera_delta
    if cd.nonzero and linked and not obs.interstitial:
        axes = cd.axes()
        if "focus" in axes:
            labels.add(_t("camera_motion.rack_focus"))
        if "zoom" in axes:
            labels.add(_t("camera_motion.dolly" if "zoom" in obs.focus_locks else "camera_motion.zoom"))
        else:
            if "center_y" in axes:
                labels.add(_t("camera_motion.tilt" if "center_y" in obs.focus_locks
                              else "camera_motion.pedestal"))
            if "center_x" in axes:
                labels.add(_t("camera_motion.pan" if "center_x" in obs.focus_locks
                              else "camera_motion.truck"))

    if not linked and a.elements and b.elements and not obs.interstitial:
        if obs.wipe:
            labels.add(_t("refresh.wipe"))
        elif obs.opacity_ramp:
            labels.add(_t("refresh.fade"))
        else:
            labels.add(_t("refresh.hard_cut"))

    pairs = []
    expanding = False
    shrinking = False
    for p, d in zip(c.pairs, obs.deltas):
        x, y = a.element(p.source), b.element(p.target)
        same_color = x.variables.color == y.variables.color
        if x.kind != "background" and y.kind == "background" and same_color:
            expanding = True
            continue
        if x.kind == "background" and y.kind != "background" and same_color:
            shrinking = True
            continue
        pairs.append((x, y, d.changed))
    if expanding:
        labels.add(_t("preserving_guide.expanding_guide"))
    if shrinking:
        labels.add(_t("preserving_guide.shrinking_guide"))

    used_a, used_b = set(c.source_ids()), set(c.target_ids())
    moving = [el for el in a.elements if el.id not in used_a] + \
        [el for el in b.elements if el.id not in used_b]

    for x, y, ch in pairs:
        if ch & {"shape", "color"}:
            continue
        if ch & {"position", "orientation"} or ("size" in ch and not _bound(x) and not _bound(y)):
            labels.add(_t("preserving_guide.rst_guide"))
            break
    if pairs and all(not ch & APPEARANCE for _, _, ch in pairs) and \
            any(not _bound(el) for el in moving):
        labels.add(_t("preserving_guide.staying_guide"))
    if pairs and all(not ch & {"shape", "position", "color"} for _, _, ch in pairs) and \
            any(_bound(el) for el in moving):
        labels.add(_t("narrative_agent.updating_content"))
    for x, y, ch in pairs:
        if (_bound(x) or _bound(y)) and "size" in ch and \
                not ch & {"position", "color", "shape", "orientation"}:
            labels.add(_t("narrative_agent.scaling"))
        if "shape" in ch and "position" not in ch:
            labels.add(_t("narrative_agent.morphing"))
    if any(g.is_merge for g in c.groups):
        labels.add(_t("narrative_agent.merging"))
    if any(g.is_split for g in c.groups):
        labels.add(_t("narrative_agent.splitting"))
    return frozenset(labels)


def label_names(labels: Iterable[TransitionType]) -> List[str]:
    names = [t.name for t in sorted(labels, key=order_key)]
    return names or [UNKNOWN]


# ---------------------------------------------------------------- corpus statistics

FORMS = ("vis-vis", "others-vis", "vis-others")
_FORM_ALIASES = {
    "vis-vis": "vis-vis", "vis_vis": "vis-vis", "vis->vis": "vis-vis",
    "others-vis": "others-vis", "nonvis_vis": "others-vis", "non-vis->vis": "others-vis",
    "vis-others": "vis-others", "vis_nonvis": "vis-others", "vis->non-vis": "vis-others",
}


def pct(count: int, denominator: int) -> str:
    """100 * count / denominator, half away from zero, one decimal."""
    if denominator == 0:
        return "0.0"
    q = Decimal(100 * count) / Decimal(denominator)
    return str(q.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class Share:
    name: str
    count: int
    percent: str


@dataclass(frozen=True)
class CorpusStats:
    total: int
    categories: Tuple[Share, ...]
    forms: Tuple[Share, ...]
    within_vis_vis: Tuple[Share, ...]
    agreement: Tuple[Share, ...] = ()

    def category(self, name: str) -> Share:
        return next(s for s in self.categories if s.name == name)

    def form(self, name: str) -> Share:
        return next(s for s in self.forms if s.name == name)

    def to_dict(self) -> dict:
        def rows(shares):
            return [{"name": s.name, "count": s.count, "percent": s.percent} for s in shares]

        return {
            "total": self.total,
            "categories": rows(self.categories),
            "forms": rows(self.forms),
            "within_vis_vis": rows(self.within_vis_vis),
            "agreement": rows(self.agreement),
        }

    def table(self) -> str:
        lines = [f"clips: {self.total}", "", "category            percent  count"]
        for s in self.categories:
            lines.append(f"{CATEGORY_TITLES[s.name]:<20}{s.percent + '%':>7}  {s.count}")
        lines += ["", "form                percent  count"]
        for s in self.forms:
            lines.append(f"{s.name:<20}{s.percent + '%':>7}  {s.count}")
        lines += ["", "within vis-vis      percent  count"]
        for s in self.within_vis_vis:
            lines.append(f"{CATEGORY_TITLES[s.name]:<20}{s.percent + '%':>7}  {s.count}")
        if self.agreement:
            lines += ["", "coder agreement     percent  count"]
            for s in self.agreement:
                lines.append(f"{s.name:<20}{s.percent + '%':>7}  {s.count}")
        return "\n".join(lines) + "\n"


def _category_of(label: str) -> str:
    label = label.strip()
    if label in CATEGORIES:
        return label
    return lookup(label).category


def corpus_stats(
    labels: Sequence[Tuple[str, Iterable[str]]],
    agreement: Optional[Tuple[int, int]] = None,
) -> CorpusStats:
    """Per-category, per-form and within-vis-vis shares of a labeled corpus.

    A clip carrying several labels of one category counts once for it.
    """
    total = len(labels)
    cat_counts = {c: 0 for c in CATEGORIES}
    form_counts = {f: 0 for f in FORMS}
    vv = {PRESERVING_GUIDE: 0, NARRATIVE_AGENT: 0}
    for form, names in labels:
        form = _FORM_ALIASES.get(form.strip(), form.strip())
        if form not in form_counts:
            raise ValueError(f"unknown clip form {form!r}")
        form_counts[form] += 1
        cats = {_category_of(n) for n in names if n.strip() and n.strip() != UNKNOWN}
        for cat in cats:
            cat_counts[cat] += 1
        if form == "vis-vis":
            for cat in vv:
                if cat in cats:
                    vv[cat] += 1
    n_vv = form_counts["vis-vis"]
    agree = ()
    if agreement is not None:
        yes, no = agreement
        agree = (Share("agree", yes, pct(yes, yes + no)), Share("disagree", no, pct(no, yes + no)))
    return CorpusStats(
        total,
        tuple(Share(c, cat_counts[c], pct(cat_counts[c], total)) for c in CATEGORIES),
        tuple(Share(f, form_counts[f], pct(form_counts[f], total)) for f in FORMS),
        tuple(Share(c, vv[c], pct(vv[c], n_vv)) for c in vv),
        agree,
    )


def parse_labels(text: str) -> List[Tuple[str, Tuple[str, ...]]]:
    """Rows of `form<TAB>label[,label...]`; blank lines and `#` comments are skipped."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.rstrip("\r\n").split("\t")
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected form<TAB>labels")
        names = tuple(n.strip() for n in parts[1].split(",") if n.strip())
        for n in names:
            if n != UNKNOWN:
                try:
                    _category_of(n)
                except KeyError:
                    raise ValueError(f"line {lineno}: unknown label {n!r}") from None
        rows.append((parts[0].strip(), names))
    return rows


def load_labels(path: str) -> List[Tuple[str, Tuple[str, ...]]]:
    with open(path, encoding="utf-8") as fh:
        return parse_labels(fh.read())


def paper_fixture() -> Tuple[List[Tuple[str, Tuple[str, ...]]], Tuple[int, int]]:
    """Clip-level expansion of the published corpus marginals, plus coder agreement."""
    raw = json.loads(resources.files("dvc").joinpath("data", "paper_corpus.json")
                     .read_text(encoding="utf-8"))
    rows = []
    for block in raw["blocks"]:
        rows += [(block["form"], tuple(block["labels"]))] * block["count"]
    ag = raw["agreement"]
    return rows, (ag["agree"], ag["disagree"])


# ---------------------------------------------------------------- lint


def _form_pair(a: Scene, b: Scene) -> Optional[str]:
    va, vb = a.clip_form == "visualization", b.clip_form == "visualization"
    if va and vb:
        return "vis_vis"
    if va:
        return "vis_nonvis"
    if vb:
        return "nonvis_vis"
    return None


def clip_context(spec: VideoSpec, index: int, scenes: Dict[str, Scene]) -> Optional[Context]:
    clip = spec.clips[index]
    a, b = scenes[clip.source], scenes[clip.target]
    vis = tuple(v for v in (a.vis_type, b.vis_type) if v)
    form = _form_pair(a, b)
    relation = clip.relation
    if form is None and relation is None and not vis:
        return None
    return Context(form, relation, vis)


def lint(spec: VideoSpec) -> List[Diagnostic]:
    """Contract checks on authored correspondences plus recommendation notes."""
    scenes, diags = expanded_scenes(spec)
    for i, clip in enumerate(spec.clips):
        span = spec.spans.get(("clip", i), NO_SPAN)
        if clip.source not in scenes or clip.target not in scenes:
            continue
        a, b = scenes[clip.source], scenes[clip.target]
        try:
            c = correspond(a, b, clip_maps(clip))
            inter = scenes.get(clip.halftime_scene) if clip.halftime_scene else None
            plan_transition(clip, a, b, c, inter, (spec.width, spec.height))
        except PlanError as exc:
            diags.append(error(span, exc.code, str(exc)))
            continue
        except ValueError as exc:
            diags.append(error(span, "plan-error", str(exc)))
            continue
        delta = scene_diff(a, b, c)
        types = clip.types
        for t in types:
            ok, violations = satisfies(delta, t, combined=types)
            if not ok:
                what = ", ".join(str(v) for v in violations[:4])
                diags.append(warning(span, "contract-violation",
                                     f"{t.name} contract broken by the mapped elements ({what})"))
        ctx = clip_context(spec, i, scenes)
        if ctx is not None:
            recs = [r.transition for r in recommend(ctx) if r.transition.subtype is not None]
            if recs and not any(t in recs for t in types):
                diags.append(info(span, "consider", f"consider: {recs[0].subtype}"))
    return sort_diagnostics(diags)
