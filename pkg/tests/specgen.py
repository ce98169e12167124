"""Random valid VideoSpec values built directly from the document types."""
import random
import string

from dvc.charts import CHART_OPTIONS, ChartDecl, Dataset, icon_geometry, icon_names
from dvc.geometry import Geometry
from dvc.model import CLIP_FORMS, ELEMENT_KINDS, VIS_TYPES, CameraPose, Scene, VisualElement, VisualVariables
from dvc.speclang.document import EASINGS, RELATIONS, ClipSpec, TransitionEntry, VideoSpec
from dvc.taxonomy import ALL_TYPES

RESERVED = {"video", "data", "scene", "clip", "chart", "transition", "map", "halftime",
            "camera", "segment"} | set(ELEMENT_KINDS)
TEXT_CHARS = string.ascii_letters + string.digits + " .,:;!?-_'\"\\\t\n#()[]{}=é€"


def ident(rng, taken=()):
    while True:
        name = rng.choice(string.ascii_lowercase) + "".join(
            rng.choice(string.ascii_lowercase + string.digits + "_") for _ in range(rng.randint(0, 6)))
        if name not in RESERVED and name not in taken:
            return name


def number(rng, lo=-1000.0, hi=1000.0):
    r = rng.random()
    if r < 0.3:
        return float(rng.randint(int(lo), int(hi)))
    if r < 0.4:
        return rng.choice([1e-7, 0.1, 2.5e-5, 123456789.125, 1e15]) * rng.choice([1, -1])
    return round(rng.uniform(lo, hi), rng.randint(0, 9))


def positive(rng, hi=500.0):
    return abs(number(rng, 0, hi)) or 1.0


def text(rng):
    return "".join(rng.choice(TEXT_CHARS) for _ in range(rng.randint(0, 12)))


def color(rng):
    return tuple(rng.randint(0, 255) for _ in range(3))


def point(rng):
    return (number(rng), number(rng))


def geometry(rng):
    kind = rng.choice(["polygon", "polyline", "circle", "arc_sector", "rectangle", "text_run",
                       "icon_path", "icon"])
    if kind == "circle":
        return Geometry("circle", radius=positive(rng))
    if kind == "rectangle":
        return Geometry("rectangle", width=positive(rng), height=positive(rng))
    if kind == "arc_sector":
        start = round(rng.uniform(-360, 360), 3)
        end = start + round(rng.uniform(0.001, 360), 3)
        if end - start > 360 or not end > start:
            end = start + 90.0
        inner = rng.choice([0.0, 0.0, round(rng.uniform(0, 0.99), 2)])
        return Geometry("arc_sector", radius=positive(rng), start=start, end=end, inner=inner)
    if kind == "text_run":
        return Geometry("text_run", text=text(rng), font_size=rng.choice([24.0, positive(rng, 96)]))
    if kind == "icon":
        return icon_geometry(rng.choice(icon_names()))
    n = rng.randint(3 if kind != "polyline" else 2, 6)
    return Geometry(kind, vertices=tuple(point(rng) for _ in range(n)))


def element(rng, eid, datasets):
    binding = None
    if datasets and rng.random() < 0.3:
        binding = (rng.choice(datasets).id, ident(rng), ident(rng))
    variables = VisualVariables(
        shape=geometry(rng),
        position=rng.choice([(0.0, 0.0), point(rng)]),
        size=rng.choice([1.0, positive(rng, 5)]),
        color=rng.choice([(0, 0, 0), color(rng)]),
        orientation=rng.choice([0.0, round(rng.uniform(0, 359.9), 3)]),
        opacity=rng.choice([1.0, round(rng.random(), 4)]),
        depth=rng.choice([0, rng.randint(0, 4)]),
    )
    return VisualElement(eid, rng.choice(ELEMENT_KINDS), variables, binding)


def option_value(rng, kind):
    if kind == "field":
        return ident(rng)
    if kind == "ident":
        return ident(rng)
    if kind == "number":
        return number(rng)
    return tuple(color(rng) for _ in range(rng.randint(1, 3)))


def chart(rng, cid, datasets):
    keys = rng.sample(sorted(CHART_OPTIONS), rng.randint(0, 4))
    options = tuple(sorted((k, option_value(rng, CHART_OPTIONS[k])) for k in keys))
    return ChartDecl(rng.choice(VIS_TYPES), cid, rng.choice(datasets).id,
                     rng.choice([(0.0, 0.0), point(rng)]),
                     rng.choice([(400.0, 300.0), (positive(rng), positive(rng))]), options)


def dataset(rng, did):
    rows = []
    for _ in range(rng.randint(0, 3)):
        names = []
        for _ in range(rng.randint(1, 3)):
            names.append(ident(rng, names))
        rows.append(tuple((n, rng.choice([number(rng), text(rng)])) for n in names))
    return Dataset(did, tuple(rows))


def pose(rng):
    return CameraPose(point(rng), positive(rng, 10), float(rng.randint(0, 3)))


def scene(rng, sid, datasets):
    ids = []
    elements = []
    for _ in range(rng.randint(0, 4)):
        eid = ident(rng, ids)
        ids.append(eid)
        elements.append(element(rng, eid, datasets))
    charts = []
    if datasets:
        for _ in range(rng.randint(0, 2)):
            cid = ident(rng, ids)
            ids.append(cid)
            charts.append((rng.randint(0, len(elements)), chart(rng, cid, datasets)))
        charts.sort(key=lambda c: c[0])
    return Scene(sid, tuple(elements), rng.choice([CameraPose(), pose(rng)]),
                 rng.choice(CLIP_FORMS), rng.choice([None, rng.choice(VIS_TYPES)]), tuple(charts))


def transition(rng):
    params = {}
    for key in rng.sample(["direction", "focus", "item", "background", "factor"], rng.randint(0, 2)):
        params[key] = number(rng) if key == "factor" else ident(rng)
    return TransitionEntry(rng.choice(ALL_TYPES), rng.choice([1.0, positive(rng, 10)]),
                           rng.choice(EASINGS), tuple(sorted(params.items())))


def id_group(rng, n):
    return tuple(ident(rng) for _ in range(n))


def clip(rng, scene_ids, first):
    maps = []
    for _ in range(rng.randint(0, 2)):
        if rng.random() < 0.5:
            maps.append((id_group(rng, 1), id_group(rng, rng.randint(1, 3))))
        else:
            maps.append((id_group(rng, rng.randint(1, 3)), id_group(rng, 1)))
    path = tuple((round(rng.random(), 3), pose(rng)) for _ in range(rng.randint(0, 2)))
    return ClipSpec(
        rng.choice(scene_ids), rng.choice(scene_ids),
        tuple(transition(rng) for _ in range(rng.randint(1, 2))), tuple(maps),
        rng.choice([None, rng.choice(scene_ids)]), path,
        False if first else rng.random() < 0.2, rng.choice((None,) + RELATIONS),
    )


def random_spec(rng: random.Random) -> VideoSpec:
    dids = []
    for _ in range(rng.randint(0, 2)):
        dids.append(ident(rng, dids))
    datasets = tuple(dataset(rng, d) for d in dids)
    sids = []
    for _ in range(rng.randint(1, 4)):
        sids.append(ident(rng, sids))
    scenes = tuple(scene(rng, s, datasets) for s in sids)
    clips = tuple(clip(rng, sids, i == 0) for i in range(rng.randint(0, 3)))
    return VideoSpec(text(rng), rng.randint(1, 120), rng.randint(1, 4000), rng.randint(1, 4000),
                     color(rng), datasets, scenes, clips)


def mutate(source: str, rng: random.Random) -> str:
    """Damage a document with a few random edits."""
    s = source
    for _ in range(rng.randint(1, 4)):
        i = rng.randint(0, len(s))
        op = rng.random()
        if op < 0.4:
            s = s[:i] + s[i + rng.randint(1, 8):]
        elif op < 0.8:
            s = s[:i] + "".join(rng.choice('{}()[]=@->#",.x9 \n\t\\é') for _ in range(rng.randint(1, 4))) + s[i:]
        else:
            s = s[:i] + s[i:].replace("=", " ", 1)
    return s
