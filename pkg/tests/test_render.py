import json
import math
import re

import pytest
from hypothesis import given, settings, strategies as st

import dvc
from dvc.compiler import plan_clip, plan_video
from dvc.easing import EASING_FUNCTIONS, ease
from dvc.geometry import circle, sector
from dvc.model import CameraPose, Scene, VisualElement, VisualVariables
from dvc.render import (
    SamplingError,
    apply_camera,
    frame_count,
    frame_plan,
    num,
    render_frame,
    render_scene,
    render_video,
    sample,
)
from dvc.speclang import parse

HEAD = 'video "t" fps=10 height=270 width=480\n'
A = 'scene a form=non_visualization {\n  annotation x r=10\n}\n'
B = 'scene b form=non_visualization {\n  annotation y at=(50, 0) r=20\n}\n'


def smoothstep(u):
    return 3 * u ** 2 - 2 * u ** 3


def fade_timeline():
    src = HEAD + A + B + "clip a -> b {\n  transition refresh.fade easing=ease_in_out\n}\n"
    return plan_clip(parse(src), 0)


def test_sampling_outside_the_clip_is_an_error():
    tl = fade_timeline()
    for t in (-0.01, 1.01, float("nan")):
        with pytest.raises(SamplingError):
            sample(tl, t)


def test_fade_opacity_follows_smoothstep():
    tl = fade_timeline()
    assert sample(tl, 0.5).elements == ()
    (x,) = sample(tl, 0.25).elements
    assert x.variables.opacity == pytest.approx(1 - smoothstep(0.5))
    (x,) = sample(tl, 0.1).elements
    assert x.variables.opacity == pytest.approx(1 - smoothstep(0.2))
    (y,) = sample(tl, 0.9).elements
    assert y.id == "y" and y.variables.opacity == pytest.approx(smoothstep(0.8))


def _scene(*els, camera=CameraPose()):
    return Scene("s", tuple(els), camera)


def _dot(eid, pos, depth=0):
    return VisualElement(eid, "annotation", VisualVariables(circle(5), pos, depth=depth))


def test_identity_camera_centers_the_origin():
    ds = apply_camera(_scene(_dot("o", (0, 0))), CameraPose(), (400, 200))
    (de,) = ds.elements
    assert de.anchor == (200.0, 100.0) and de.blur == 0.0
    assert de.scale == pytest.approx(200 / 1000)


def test_zoom_two_doubles_screen_distances():
    s = _scene(_dot("a", (0, 0)), _dot("b", (100, 50)))

    def gap(zoom):
        a, b = apply_camera(s, CameraPose((0, 0), zoom, 0), (500, 500)).elements
        return math.dist(a.anchor, b.anchor)

    assert gap(2) == pytest.approx(2 * gap(1))


def test_focus_blurs_by_layer_distance():
    s = _scene(_dot("a", (0, 0), 0), _dot("b", (0, 0), 1))
    ds = apply_camera(s, CameraPose((0, 0), 1, 0), (100, 100))
    assert [de.blur for de in ds.elements] == [0.0, 4.0]
    ds = apply_camera(s, CameraPose((0, 0), 1, 1), (100, 100))
    assert [de.blur for de in ds.elements] == [4.0, 0.0]


def test_empty_scene_is_root_and_background_only():
    svg = render_scene(_scene(), (320, 180))
    lines = svg.splitlines()
    assert lines[0].startswith("<?xml") and lines[1].startswith("<svg")
    assert lines[2:] == ['<rect x="0" y="0" width="320" height="180" fill="#FFFFFF"/>', "</svg>"]
    assert render_scene(_scene(), (320, 180)) == svg


def test_thin_sector_arc_endpoints():
    el = VisualElement("w", "chart_mark", VisualVariables(sector(100, 0, 3.6)))
    svg = render_scene(_scene(el), (1000, 1000))
    nums = [float(v) for v in re.findall(r"-?\d+\.\d+", svg.split("<path", 1)[1].split("/>")[0])]
    # start point straight up, end point 3.6 degrees clockwise
    pts = list(zip(nums[::2], nums[1::2]))
    start = (500.0, 400.0)
    end = (500 + 100 * math.sin(math.radians(3.6)), 500 - 100 * math.cos(math.radians(3.6)))
    assert any(math.dist(p, start) < 1e-6 for p in pts)
    assert any(math.dist(p, end) < 1e-6 for p in pts)


def test_numbers_have_six_decimals():
    assert [num(x) for x in (1, 0.5, -1e-9, 2 / 3)] == ["1.000000", "0.500000", "0.000000", "0.666667"]


def test_frame_count_rounds_half_up():
    assert [frame_count(d, 30) for d in (1, 0.05, 1 / 60, 2.5)] == [30, 2, 1, 75]
    assert frame_count(0.01, 10) == 1


def _chain(segment=False):
    c = HEAD + A + B + 'scene c form=non_visualization {\n  annotation z r=5\n}\n'
    c += "clip a -> b {\n  transition refresh.fade duration=1\n}\n"
    c += ("segment\n" if segment else "") + "clip b -> c {\n  transition refresh.fade duration=1\n}\n"
    return parse(c)


def test_minimal_script_is_thirty_one_frames(tmp_path):
    fs = render_video(parse(dvc.bundled_script("minimal")), str(tmp_path))
    assert len(fs.files) == 31
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert set(manifest) == {"fps", "width", "height", "clips", "spec_sha256"}
    assert set(manifest["clips"][0]) == {"from", "to", "first_frame", "last_frame", "transitions"}
    assert manifest["clips"][0]["transitions"] == ["preserving_guide.rst_guide"]
    assert sorted(p.name for p in tmp_path.iterdir()) == sorted(fs.files) + ["manifest.json"]


def test_chained_clips_share_a_boundary_frame():
    spec = _chain()
    frames, ranges = frame_plan(spec, plan_video(spec))
    assert len(frames) == 21
    assert (ranges[0].first_frame, ranges[0].last_frame) == (0, 10)
    assert (ranges[1].first_frame, ranges[1].last_frame) == (10, 20)


def test_segment_break_adds_a_frame():
    spec = _chain(segment=True)
    frames, ranges = frame_plan(spec, plan_video(spec))
    assert len(frames) == 22 and ranges[1].first_frame == 11


def test_render_is_deterministic(tmp_path):
    spec = parse(dvc.bundled_script("minimal"))
    a, b = tmp_path / "a", tmp_path / "b"
    render_video(spec, str(a))
    render_video(spec, str(b))
    for f in sorted(a.iterdir()):
        assert f.read_bytes() == (b / f.name).read_bytes()


def test_end_frames_match_standalone_scenes():
    spec = _chain()
    tl = plan_video(spec)[0]
    assert render_frame(apply_camera(sample(tl, 0.0), tl.camera_at(0.0), (480, 270))) == \
        render_scene(tl.source, (480, 270))
    assert render_frame(apply_camera(sample(tl, 1.0), tl.camera_at(1.0), (480, 270))) == \
        render_scene(tl.target, (480, 270))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(sorted(EASING_FUNCTIONS)), st.floats(-0.5, 1.5), st.floats(-0.5, 1.5))
def test_easings_are_monotone_and_pinned(name, u, v):
    lo, hi = sorted((u, v))
    assert ease(name, lo) <= ease(name, hi)
    assert ease(name, 0.0) == 0.0 and ease(name, 1.0) == 1.0
