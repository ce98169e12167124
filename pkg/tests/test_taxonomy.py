import pytest

from dvc.geometry import circle
from dvc.model import Correspondence, Pair, Scene, VisualElement, VisualVariables, scene_diff
from dvc.taxonomy import (
    ALL_TYPES,
    CANONICAL_NAMES,
    CATEGORIES,
    TransitionType,
    Violation,
    contract_of,
    lookup,
    order_key,
    satisfies,
)

from scenarios import planned


def test_twenty_concrete_types_with_dotted_names():
    assert len(ALL_TYPES) == 20
    names = [t.name for t in ALL_TYPES]
    assert "halftime" in names
    assert all(n == "halftime" or n.count(".") == 1 for n in names)
    assert {t.category for t in ALL_TYPES} == set(CATEGORIES)
    assert lookup("preserving_guide.rst_guide") == TransitionType("preserving_guide", "rst_guide")
    assert set(CANONICAL_NAMES) == set(names)


def test_subtypes_must_belong_to_their_category():
    with pytest.raises(ValueError):
        TransitionType("refresh", "zoom")
    with pytest.raises(ValueError):
        TransitionType("teleport")
    with pytest.raises(KeyError):
        lookup("preserving_guide.teleport")


def test_order_key_puts_category_fallbacks_after_members():
    zoom = lookup("camera_motion.zoom")
    fallback = TransitionType("camera_motion")
    assert order_key(zoom) < order_key(fallback) < order_key(lookup("preserving_guide.rst_guide"))


def test_contract_examples():
    upd = contract_of(lookup("narrative_agent.updating_content"))
    assert upd.must_preserve == {"shape", "position", "color"}
    sc = contract_of(lookup("narrative_agent.scaling"))
    assert sc.must_change == {"size"} and "color" in sc.must_preserve
    assert contract_of(lookup("refresh.hard_cut")).must_preserve == frozenset()


def test_contracts_are_total_and_disjoint():
    for t in ALL_TYPES:
        c = contract_of(t)
        assert not c.must_change & c.must_preserve
        assert contract_of(t) == c
    with pytest.raises(ValueError):
        contract_of(TransitionType("refresh"))


def _el(eid, color=(0, 0, 0), pos=(0, 0)):
    return VisualElement(eid, "annotation", VisualVariables(circle(10), pos, color=color))


def test_staying_guide_with_entries_is_satisfied():
    a = Scene("a", (_el("title"),))
    b = Scene("b", (_el("title"), _el("new", pos=(100, 0))))
    d = scene_diff(a, b, Correspondence((Pair("title", "title"),)))
    assert satisfies(d, lookup("preserving_guide.staying_guide")) == (True, [])


def test_rst_guide_color_change_is_reported():
    a = Scene("a", (_el("g"),))
    b = Scene("b", (_el("g", color=(255, 0, 0), pos=(50, 0)),))
    ok, violations = satisfies(scene_diff(a, b, Correspondence((Pair("g", "g"),))),
                               lookup("preserving_guide.rst_guide"))
    assert not ok and Violation("g", "color") in violations


@pytest.mark.parametrize("seed", range(3))
def test_planned_scaling_clip_satisfies_scaling(seed):
    t = lookup("narrative_agent.scaling")
    spec, tl = planned(t, seed)
    d = scene_diff(tl.source, tl.target, tl.correspondence)
    assert satisfies(d, t) == (True, [])


def test_camera_contract_needs_its_axis():
    a = Scene("a", (_el("x"),))
    d = scene_diff(a, a, Correspondence((Pair("x", "x"),)))
    ok, violations = satisfies(d, lookup("camera_motion.truck"))
    assert not ok and violations == [Violation("camera", "center_x")]
