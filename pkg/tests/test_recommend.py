import pytest
from hypothesis import given, settings, strategies as st

from dvc.model import VIS_TYPES
from dvc.recommend import FORM_PAIRS, RELATIONS, Context, recommend
from dvc.taxonomy import ALL_TYPES, CATEGORIES, order_key

FALLBACK_TAIL = ["refresh", "halftime", "camera_motion"]


def names(ctx):
    return [r.transition.name for r in recommend(ctx)]


def test_chart_to_chart():
    assert names(Context(form="vis_vis")) == [
        "preserving_guide.rst_guide", "preserving_guide.staying_guide",
        "narrative_agent.updating_content", *FALLBACK_TAIL]


def test_whole_part_pie_puts_color_expansion_before_zoom():
    out = names(Context(relation="whole_part", vis_types=("pie",)))
    assert out.index("preserving_guide.expanding_guide") < out.index("camera_motion.zoom")
    # three subtypes match both facets
    top = {r.transition.subtype for r in recommend(Context(relation="whole_part", vis_types=("pie",)))
           if r.score == 2}
    assert top == {"merging", "splitting", "expanding_guide"}


def test_contrast_suggests_guides_and_scaling():
    assert {"preserving_guide.rst_guide", "narrative_agent.scaling"} <= set(names(Context(relation="contrast")))


def test_aliases_normalize():
    assert Context(form="vis->vis") == Context(form="vis_vis")
    assert Context(relation="Whole-Part") == Context(relation="whole_part")
    assert Context(vis_types=("bar-chart", "pie", "pie")).vis_types == ("bar_chart", "pie")


@pytest.mark.parametrize("kwargs", [{}, {"form": "sideways"}, {"relation": "rivalry"},
                                    {"vis_types": ("hologram",)}])
def test_bad_contexts_raise(kwargs):
    with pytest.raises(ValueError):
        Context(**kwargs)


def _valid(form, rel, vis):
    return form is not None or rel is not None or bool(vis)


ctx_args = st.tuples(st.sampled_from((None,) + FORM_PAIRS), st.sampled_from((None,) + RELATIONS),
                     st.lists(st.sampled_from(VIS_TYPES), max_size=3).map(tuple)).filter(
    lambda a: _valid(*a))


@settings(max_examples=150, deadline=None)
@given(ctx_args)
def test_result_shape(args):
    out = recommend(Context(*args))
    assert recommend(Context(*args)) == out
    assert [r.rank for r in out] == list(range(1, len(out) + 1))
    assert [r.transition.name for r in out[-3:]] == FALLBACK_TAIL
    concrete = set(ALL_TYPES)
    for r in out[:-3]:
        assert r.transition in concrete and r.score > 0 and r.rationale
    scores = [r.score for r in out]
    assert scores == sorted(scores, reverse=True)
    for r0, r1 in zip(out, out[1:]):
        if r0.score == r1.score and r1.score > 0:
            assert order_key(r0.transition) < order_key(r1.transition)
    assert len({r.transition for r in out}) == len(out)


@settings(max_examples=150, deadline=None)
@given(ctx_args, st.sampled_from(["form", "relation", "vis"]), st.data())
def test_adding_a_facet_never_drops_a_match(args, facet, data):
    form, rel, vis = args
    if facet == "form" and form is None:
        form = data.draw(st.sampled_from(FORM_PAIRS))
    elif facet == "relation" and rel is None:
        rel = data.draw(st.sampled_from(RELATIONS))
    else:
        vis = vis + (data.draw(st.sampled_from(VIS_TYPES)),)
    before = {r.transition for r in recommend(Context(*args)) if r.score > 0}
    after = {r.transition for r in recommend(Context(form, rel, vis))}
    assert before <= after


def test_fallbacks_cover_every_category_without_subtypes():
    tail = recommend(Context(relation="none"))
    assert all(r.score == 0 for r in tail)
    assert {r.transition.category for r in tail} <= set(CATEGORIES)
