"""Compile data-video scripts into narrative transitions and SVG frames."""
from importlib import resources
from typing import Tuple

__version__ = "0.1.0"


def bundled_scripts() -> Tuple[str, ...]:
    root = resources.files(__name__).joinpath("scripts")
    return tuple(sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".dvs")))


def bundled_script(name: str) -> str:
    """Source text of a shipped example script, e.g. ``bundled_script("covid")``."""
    if name not in bundled_scripts():
        raise KeyError(f"no bundled script {name!r}")
    return resources.files(__name__).joinpath("scripts", f"{name}.dvs").read_text(encoding="utf-8")
