import math

import pytest
from hypothesis import given, settings, strategies as st

from dvc.geometry import Geometry, GeometryError, circle, rectangle, sector, text_run
from dvc.model import (
    CHANNELS,
    CameraPose,
    Correspondence,
    CorrespondenceError,
    ModelError,
    Pair,
    Scene,
    VisualElement,
    VisualVariables,
    identity_correspondence,
    scene_diff,
    variable_delta,
)


def el(eid, shape=None, kind="annotation", **kw):
    return VisualElement(eid, kind, VisualVariables(shape=shape or circle(10), **kw))


# ------------------------------------------------------------- invariants


def test_variables_normalize_orientation_and_reject_bad_values():
    assert VisualVariables(circle(1), orientation=370).orientation == 10.0
    assert VisualVariables(circle(1), orientation=-90).orientation == 270.0
    with pytest.raises(ModelError):
        VisualVariables(circle(1), size=-0.1)
    with pytest.raises(ModelError):
        VisualVariables(circle(1), opacity=1.5)
    with pytest.raises(ModelError):
        VisualVariables(circle(1), color=(0, 0, 256))
    with pytest.raises(ModelError):
        VisualVariables(circle(1), depth=-1)


def test_geometry_invariants():
    with pytest.raises(GeometryError):
        Geometry("polygon", vertices=((0, 0), (1, 1)))
    with pytest.raises(GeometryError):
        sector(10, 90, 45)
    with pytest.raises(GeometryError):
        sector(10, 0, 361)
    assert sector(10, 0, 360).span == 360


def test_element_and_scene_invariants():
    with pytest.raises(ModelError):
        el("")
    with pytest.raises(ModelError):
        el("x", kind="sprite")
    with pytest.raises(ModelError):
        Scene("s", (el("x"), el("x")))
    with pytest.raises(ModelError):
        CameraPose(zoom=0)
    assert not Scene("s", (el("x"),)).form_ok()
    assert Scene("s", (el("x"),), vis_type="pie").form_ok()
    assert Scene("s", (el("x"),), clip_form="non_visualization").form_ok()


# --------------------------------------------------------- variable_delta


def test_identical_elements_have_no_changes():
    x = el("x", color=(1, 2, 3), position=(5, 5))
    d = variable_delta(x, x)
    assert d.changed == frozenset()
    assert d.preserved == frozenset(CHANNELS)


def test_single_position_perturbation():
    a, b = el("x", position=(0, 0)), el("x", position=(10, 0))
    from dvc.model import Tolerances

    assert variable_delta(a, b, Tolerances(position=0.5)).changed == {"position"}


def _resample_closed(points, n=64):
    # independent arc-length resampler used as the oracle
    pts = list(points) + [points[0]]
    seg = [math.dist(p, q) for p, q in zip(pts, pts[1:])]
    total = sum(seg)
    out, i, acc = [], 0, 0.0
    for k in range(n):
        target = total * k / n
        while acc + seg[i] < target:
            acc += seg[i]
            i += 1
        u = 0.0 if seg[i] == 0 else (target - acc) / seg[i]
        p, q = pts[i], pts[i + 1]
        out.append((p[0] + (q[0] - p[0]) * u, p[1] + (q[1] - p[1]) * u))
    return out


def test_circle_versus_quarter_sector_changes_shape_only():
    r = 1.0
    circ = [(r * math.sin(2 * math.pi * k / 360), -r * math.cos(2 * math.pi * k / 360))
            for k in range(360)]
    wedge = [(0.0, 0.0)] + [(r * math.sin(math.radians(a)), -r * math.cos(math.radians(a)))
                            for a in range(0, 91)]
    a, b = _resample_closed(circ), _resample_closed(wedge)
    assert max(math.dist(p, q) for p, q in zip(a, b)) > 1e-6
    d = variable_delta(el("x", circle(r), color=(200, 0, 0)),
                       el("x", sector(r, 0, 90), color=(200, 0, 0)))
    assert d.changed == {"shape"}


def test_text_change_is_a_shape_change():
    d = variable_delta(el("t", text_run("a", 20), kind="text"), el("t", text_run("b", 20), kind="text"))
    assert d.changed == {"shape"}


# ------------------------------------------------------------- scene_diff


def test_identity_diff():
    s = Scene("s", (el("a"), el("b", rectangle(3, 4))))
    d = scene_diff(s, s, identity_correspondence(s))
    assert all(not m.changed for m in d.matched)
    assert d.exited == () and d.entered == ()
    assert not d.camera_delta.nonzero


def test_empty_correspondence_exits_and_enters_everything():
    a = Scene("a", (el("x"), el("y")))
    b = Scene("b", (el("z"),))
    d = scene_diff(a, b, Correspondence())
    assert d.matched == () and d.exited == ("x", "y") and d.entered == ("z",)


def test_one_pair_one_exit_one_entry():
    a = Scene("a", (el("p", color=(255, 0, 0)), el("gone")))
    b = Scene("b", (el("p", color=(0, 0, 255)), el("new", rectangle(1, 1))))
    d = scene_diff(a, b, Correspondence((Pair("p", "p"),)))
    # enumerate ids by hand
    assert {m.source for m in d.matched} == {"p"}
    assert d.matched[0].changed == {"color"}
    assert (d.exited, d.entered) == (("gone",), ("new",))


def test_unknown_ids_raise_correspondence_error():
    a = Scene("a", (el("p"),))
    with pytest.raises(CorrespondenceError):
        scene_diff(a, a, Correspondence((Pair("p", "missing"),)))
    with pytest.raises(CorrespondenceError):
        scene_diff(a, a, Correspondence((Pair("p", "p"), Pair("p", "p"))))


def test_camera_delta():
    a = Scene("a", camera=CameraPose((0, 0), 1, 0))
    b = Scene("b", camera=CameraPose((0, 5), 2, 1))
    assert scene_diff(a, b, Correspondence()).camera_delta.axes() == {"center_y", "zoom", "focus"}


# ------------------------------------------------------------- properties

coords = st.floats(-1000, 1000, allow_nan=False)
shapes = st.one_of(
    st.floats(0.5, 200).map(circle),
    st.tuples(st.floats(1, 200), st.floats(1, 200)).map(lambda wh: rectangle(*wh)),
    st.tuples(st.floats(1, 200), st.floats(0, 180), st.floats(1, 180)).map(
        lambda t: sector(t[0], t[1], t[1] + t[2])),
    st.text(min_size=1, max_size=5).map(lambda s: text_run(s, 24)),
)
elements = st.builds(
    lambda shape, pos, size, color, rot, op: el("e", shape, position=pos, size=size, color=color,
                                                orientation=rot, opacity=op),
    shapes, st.tuples(coords, coords), st.floats(0, 5), st.tuples(*[st.integers(0, 255)] * 3),
    st.floats(0, 359), st.floats(0, 1),
)


@settings(max_examples=100, deadline=None)
@given(elements)
def test_self_delta_is_empty(x):
    assert variable_delta(x, x).changed == frozenset()


@settings(max_examples=100, deadline=None)
@given(elements, elements)
def test_delta_is_symmetric(x, y):
    assert variable_delta(x, y).changed == variable_delta(y, x).changed


@settings(max_examples=60, deadline=None)
@given(st.lists(st.booleans(), min_size=1, max_size=6), st.integers(0, 6))
def test_scene_diff_partitions_elements(keep, extra):
    a = Scene("a", tuple(el(f"a{i}") for i in range(len(keep))))
    kept = [f"a{i}" for i, k in enumerate(keep) if k]
    b = Scene("b", tuple(el(i) for i in kept) + tuple(el(f"b{j}") for j in range(extra)))
    d = scene_diff(a, b, Correspondence(tuple(Pair(i, i) for i in kept)))
    src = [m.source for m in d.matched] + list(d.exited)
    tgt = [m.target for m in d.matched] + list(d.entered)
    assert sorted(src) == sorted(a.ids()) and sorted(tgt) == sorted(b.ids())
