"""
Synthetic Data Module

Flickering-light scenes with a moving foreground object, rendered into
labelled event streams by level-crossing simulation.
"""

from .scene import (
    SceneError, Harmonic, FlickerModel, ForegroundModel, SyntheticScene,
    default_scene, parse_scene, dump_scene, load_scene_file, dump_scene_file, with_overrides,
    SCENE_KEYS,
)
from .generator import SyntheticStream, generate, level_crossings

__all__ = [
    "SceneError",
    "Harmonic",
    "FlickerModel",
    "ForegroundModel",
    "SyntheticScene",
    "default_scene",
    "parse_scene",
    "dump_scene",
    "load_scene_file",
    "dump_scene_file",
    "with_overrides",
    "SCENE_KEYS",
    "SyntheticStream",
    "generate",
    "level_crossings",
]
