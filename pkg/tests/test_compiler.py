import math

import pytest

from dvc.compiler import (
    Keyframe,
    PlanConflict,
    PlanError,
    Track,
    correspond,
    plan_clip,
    ramp,
)
from dvc.geometry import circle
from dvc.model import Scene, VisualElement, VisualVariables, scene_diff
from dvc.render import sample
from dvc.speclang import parse, validate
from dvc.taxonomy import lookup, satisfies

HEAD = 'video "t" fps=10 height=270 width=480\n'


def script(a, b, body, form="form=non_visualization"):
    return HEAD + (f"scene a {form} {{\n{a}\n}}\n"
                   f"scene b {form} {{\n{b}\n}}\n"
                   f"clip a -> b {{\n{body}\n}}\n")


def plan(src):
    return plan_clip(parse(src), 0)


def ann(eid, pos=(0, 0), color=(0, 0, 0), r=10.0):
    return VisualElement(eid, "annotation", VisualVariables(circle(r), pos, color=color))


# ---------------------------------------------------------------- correspond


def test_identical_scenes_match_one_to_one():
    s = Scene("s", (ann("a"), ann("b", (100, 0)), ann("c", (0, 100))))
    c = correspond(s, s)
    assert [(p.source, p.target, p.method) for p in c.pairs] == \
        [(i, i, "inferred") for i in ("a", "b", "c")]


def test_earlier_source_wins_a_tie():
    red = (255, 0, 0)
    a = Scene("a", (ann("first", color=red), ann("second", color=red)))
    b = Scene("b", (ann("only", color=red),))
    c = correspond(a, b)
    assert [(p.source, p.target) for p in c.pairs] == [("first", "only")]


def test_inferred_matching_respects_kind():
    a = Scene("a", (ann("x"),))
    b = Scene("b", (VisualElement("x", "icon", VisualVariables(circle(10))),))
    assert correspond(a, b).pairs == ()


def test_explicit_cross_kind_map_is_kept_with_a_warning():
    src = script('  annotation x r=10', '  icon y icon=circle',
                 '  transition narrative_agent.morphing\n  map x -> y')
    spec = parse(src)
    assert [d.code for d in validate(spec)] == ["kind-mismatch"]
    tl = plan_clip(spec, 0)
    assert [(p.source, p.target, p.method) for p in tl.correspondence.pairs] == [("x", "y", "explicit")]


# ---------------------------------------------------------------- tracks


def test_linear_track_midpoint():
    assert ramp("size", 0.0, 0.0, 1.0, 10.0, "linear").value_at(0.5) == 5.0


def test_track_keys_must_be_ordered_in_unit_interval():
    with pytest.raises(PlanError):
        Track("size", (Keyframe(0.6, 1.0), Keyframe(0.2, 2.0)))
    with pytest.raises(PlanError):
        Track("size", (Keyframe(0.0, 1.0), Keyframe(1.5, 2.0)))


# ---------------------------------------------------------------- planning


def test_hard_cut_has_one_discontinuity_and_no_tracks():
    tl = plan(script('  annotation x r=10', '  annotation y at=(50, 0) r=20',
                     '  transition refresh.hard_cut'))
    assert tl.discontinuities == (0.5,)
    assert tl.tracks() == []
    assert [e.id for e in sample(tl, 0.49).elements] == ["x"]
    assert [e.id for e in sample(tl, 0.5).elements] == ["y"]


def test_scaling_one_to_four_doubles_the_size():
    src = HEAD + """
data d1 {
  (k="a" v=1)
}
data d2 {
  (k="a" v=4)
}
scene a vis=proportional_area {
  chart proportional_area p category=k data=d1 ref=1 value=v
}
scene b vis=proportional_area {
  chart proportional_area p category=k data=d2 ref=1 value=v
}
clip a -> b {
  transition narrative_agent.scaling
  map p_a -> p_a
}
"""
    tl = plan(src)
    (key, tr), = [(k, t) for k, t in tl.tracks() if t.channel == "size"]
    assert tr.value_at(1.0) / tr.value_at(0.0) == pytest.approx(2.0)
    assert tr.value_at(0.0) == pytest.approx(1.0)


def test_merging_three_icons_converges():
    a = "\n".join(f"  icon s{i} at=({x}, 0) icon=person" for i, x in enumerate((-300, 0, 300)))
    tl = plan(script(a, "  icon whole at=(0, 200) icon=person size=2",
                     "  transition narrative_agent.merging\n  map s0, s1, s2 -> whole"))
    movers = [(k, t) for k, t in tl.tracks() if t.channel == "position"]
    assert len(movers) == 3
    assert len({t.value_at(1.0) for _, t in movers}) == 1
    for _, t in movers:
        d0 = math.dist(t.value_at(0.0), t.value_at(1.0))
        d5 = math.dist(t.value_at(0.5), t.value_at(1.0))
        assert d5 <= d0
    d = scene_diff(tl.source, tl.target, tl.correspondence)
    assert satisfies(d, lookup("narrative_agent.merging"))[0]


def test_split_undoes_merge():
    many = "\n".join(f"  icon s{i} at=({x}, {y}) icon=person"
                     for i, (x, y) in enumerate(((-300, 0), (0, -100), (300, 50))))
    one = "  icon whole at=(0, 200) icon=person size=2"
    merge = plan(script(many, one, "  transition narrative_agent.merging\n  map s0, s1, s2 -> whole"))
    split = plan(script(one, many, "  transition narrative_agent.splitting\n  map whole -> s0, s1, s2"))
    start = {e.id: e.variables.position for e in sample(merge, 0.0).elements}
    end = {e.id: e.variables.position for e in sample(split, 1.0).elements}
    assert start == end


def test_camera_only_clip_keeps_element_coordinates():
    body = '  annotation p at=(100, 50) r=30\n  text t at=(0, -300) text="Title"'
    src = HEAD + (f"scene a form=non_visualization camera=(0, 0, 1, 0) {{\n{body}\n}}\n"
                  f"scene b form=non_visualization camera=(0, 0, 2, 0) {{\n{body}\n}}\n"
                  "clip a -> b {\n  transition camera_motion.zoom\n}\n")
    tl = plan(src)
    frames = [sample(tl, k / 10) for k in range(11)]
    assert len({f.elements for f in frames}) == 1
    zooms = [f.camera.zoom for f in frames]
    assert zooms[0] == 1 and zooms[-1] == 2 and zooms == sorted(zooms)


def test_two_transitions_claiming_one_camera_axis_conflict():
    body = '  annotation p r=30'
    src = HEAD + (f"scene a form=non_visualization camera=(0, 0, 1, 0) {{\n{body}\n}}\n"
                  f"scene b form=non_visualization camera=(200, 0, 2, 0) {{\n{body}\n}}\n"
                  "clip a -> b {\n  transition camera_motion.truck\n"
                  "  transition camera_motion.zoom\n}\n")
    with pytest.raises(PlanConflict):
        plan(src)


def test_refresh_does_not_combine():
    with pytest.raises(PlanConflict):
        plan(script('  annotation x r=10', '  annotation x r=20',
                    '  transition refresh.fade\n  transition narrative_agent.scaling'))


def test_morphing_open_into_closed_is_rejected():
    with pytest.raises(PlanError):
        plan(script('  annotation m shape=polyline points=[(0, 0) (50, 50)]', '  annotation m r=40',
                    '  transition narrative_agent.morphing\n  map m -> m'))
