"""In-memory form of a parsed DVS document."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from ..charts import Dataset
from ..model import CameraPose, Color, Scene
from ..taxonomy import HALFTIME, TransitionType

EASINGS = ("linear", "ease_in_out", "ease_in", "ease_out")
RELATIONS = ("question_answer", "whole_part", "progress", "supplement", "contrast", "none")
DEFAULT_DURATION = 1.0
DEFAULT_EASING = "ease_in_out"


@dataclass(frozen=True)
class TransitionEntry:
    type: TransitionType
    duration: float = DEFAULT_DURATION
    easing: str = DEFAULT_EASING
    # subtype-specific parameters, sorted by name: direction, focus, item,
    # background, factor
    params: Tuple[Tuple[str, object], ...] = ()

    def param(self, name: str, default=None):
        for k, v in self.params:
            if k == name:
                return v
        return default


@dataclass(frozen=True)
class ClipSpec:
    source: str
    target: str
    transitions: Tuple[TransitionEntry, ...]
    maps: Tuple[Tuple[Tuple[str, ...], Tuple[str, ...]], ...] = ()
    halftime_scene: Optional[str] = None
    camera_path: Tuple[Tuple[float, CameraPose], ...] = ()
    new_segment: bool = False
    # content relation between the two scenes, used only for recommendations
    relation: Optional[str] = None

    @property
    def duration(self) -> float:
        return max(t.duration for t in self.transitions)

    @property
    def types(self) -> Tuple[TransitionType, ...]:
        return tuple(t.type for t in self.transitions)

    def entry(self, subtype: str) -> Optional[TransitionEntry]:
        for t in self.transitions:
            if t.type.subtype == subtype or (subtype == HALFTIME and t.type.category == HALFTIME):
                return t
        return None

    @property
    def name(self) -> str:
        return f"{self.source} -> {self.target}"


@dataclass(frozen=True)
class VideoSpec:
    title: str
    fps: int = 30
    width: int = 960
    height: int = 540
    background: Color = (255, 255, 255)
    datasets: Tuple[Dataset, ...] = ()
    scenes: Tuple[Scene, ...] = ()
    clips: Tuple[ClipSpec, ...] = ()
    # source spans keyed by ("scene", id), ("clip", i), ... ; not part of equality
    spans: Dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def scene(self, scene_id: str) -> Scene:
        for s in self.scenes:
            if s.id == scene_id:
                return s
        raise KeyError(scene_id)

    def dataset_map(self) -> Dict[str, Dataset]:
        return {d.id: d for d in self.datasets}
