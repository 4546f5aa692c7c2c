"""
Synthetic Scene Description

A flickering light region driven by supply-frequency harmonics, an optional
moving rectangular foreground object, and the flat key-value scene file
that stores them.
"""

import math
import logging
from dataclasses import dataclass, asdict, replace
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from events import EventStreamError, Rect, SensorGeometry

logger = logging.getLogger(__name__)

DEFAULT_WIDTH = 64
DEFAULT_HEIGHT = 64
DEFAULT_REGION_SIZE = 16
DEFAULT_BAR = (6, 4)
MIN_OVERSAMPLING = 20.0


class SceneError(Exception):
    """Base exception for synthetic scene errors"""
    pass


@dataclass(frozen=True)
class Harmonic:
    """a cos(k w0 t) + b sin(k w0 t)"""
    k: int
    a: float = 0.0
    b: float = 0.0


@dataclass(frozen=True)
class FlickerModel:
    supply_frequency: float = 50.0
    harmonics: Tuple[Harmonic, ...] = ()
    region: Rect = Rect(0, 0, 1, 1)
    dc_level: float = 0.0

    @property
    def is_static(self) -> bool:
        return not any(h.a or h.b for h in self.harmonics)

    @property
    def highest_frequency(self) -> float:
        if not self.harmonics:
            return 0.0
        return max(h.k for h in self.harmonics) * self.supply_frequency

    def value(self, t: np.ndarray) -> np.ndarray:
        """Flicker term (without dc_level) at times t"""
        t = np.asarray(t, dtype=float)
        total = np.zeros_like(t)
        omega = 2 * math.pi * self.supply_frequency
        for h in self.harmonics:
            if h.a:
                total += h.a * np.cos(h.k * omega * t)
            if h.b:
                total += h.b * np.sin(h.k * omega * t)
        return total


@dataclass(frozen=True)
class ForegroundModel:
    """Opaque rectangle moving at constant velocity"""
    width: int
    height: int
    start_x: float
    start_y: float
    velocity_x: float = 0.0
    velocity_y: float = 0.0
    edge_contrast: float = 0.5

    def position(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        t = np.asarray(t, dtype=float)
        return self.start_x + self.velocity_x * t, self.start_y + self.velocity_y * t

    def covers(self, x: int, y: int, t: np.ndarray) -> np.ndarray:
        """Whether the pixel centre lies inside the object at times t"""
        left, top = self.position(t)
        cx, cy = x + 0.5, y + 0.5
        return (left <= cx) & (cx < left + self.width) & (top <= cy) & (cy < top + self.height)


@dataclass(frozen=True)
class SyntheticScene:
    geometry: SensorGeometry
    duration: float
    flicker: FlickerModel
    foreground: Optional[ForegroundModel] = None
    contrast: float = 0.1
    simulation_rate: float = 10000.0
    seed: int = 0
    noise_rate: float = 0.0

    def validate(self) -> None:
        """Raise SceneError unless the scene is generatable"""
        if not math.isfinite(self.duration) or self.duration < 0:
            raise SceneError(f"Duration must be finite and >= 0, got {self.duration}")
        if not self.contrast > 0:
            raise SceneError(f"Contrast must be positive, got {self.contrast}")
        if not self.simulation_rate > 0:
            raise SceneError(f"Simulation rate must be positive, got {self.simulation_rate}")
        if self.noise_rate < 0:
            raise SceneError(f"Noise rate must be >= 0, got {self.noise_rate}")

        flicker = self.flicker
        if flicker.supply_frequency <= 0:
            raise SceneError(f"Supply frequency must be positive, got {flicker.supply_frequency}")
        if flicker.harmonics and flicker.is_static:
            raise SceneError("Harmonic list has no nonzero coefficient")
        if any(h.k < 0 for h in flicker.harmonics):
            raise SceneError("Harmonic indices must be >= 0")
        if not flicker.region.within(self.geometry):
            raise SceneError(f"Flicker region {flicker.region} outside {self.geometry} geometry")
        highest = flicker.highest_frequency
        if highest and self.simulation_rate < MIN_OVERSAMPLING * highest:
            raise SceneError(f"Simulation rate {self.simulation_rate} Hz below "
                             f"{MIN_OVERSAMPLING:g}x highest harmonic {highest} Hz")

        fg = self.foreground
        if fg is not None:
            if fg.width < 1 or fg.height < 1:
                raise SceneError(f"Foreground size must be positive, got {fg.width}x{fg.height}")
            if not all(math.isfinite(v) for v in (fg.start_x, fg.start_y, fg.velocity_x,
                                                   fg.velocity_y, fg.edge_contrast)):
                raise SceneError("Foreground trajectory must be finite")
            if not self._foreground_visible():
                raise SceneError("Foreground never intersects the frame")

    def _foreground_visible(self) -> bool:
        fg = self.foreground
        t = np.linspace(0.0, self.duration, 1001)
        left, top = fg.position(t)
        return bool(np.any((left < self.geometry.width) & (left + fg.width > 0)
                           & (top < self.geometry.height) & (top + fg.height > 0)))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def default_scene(geometry: Optional[SensorGeometry] = None, duration: float = 1.5,
                  seed: int = 0) -> SyntheticScene:
    """
    Fluorescent-light scene: central flickering block dominated by 100 Hz,
    crossed by a 6x4 bar that enters from the left and leaves on the right
    within the duration.
    """
    geometry = geometry or SensorGeometry(DEFAULT_WIDTH, DEFAULT_HEIGHT)
    rng = np.random.default_rng(seed)

    size_x = min(DEFAULT_REGION_SIZE, geometry.width)
    size_y = min(DEFAULT_REGION_SIZE, geometry.height)
    region = Rect((geometry.width - size_x) // 2, (geometry.height - size_y) // 2, size_x, size_y)
    flicker = FlickerModel(
        supply_frequency=50.0,
        harmonics=(
            Harmonic(k=2, b=0.3),
            Harmonic(k=1, b=0.075),
            Harmonic(k=4, b=0.03),
            Harmonic(k=6, b=0.03),
        ),
        region=region,
        dc_level=0.05,
    )

    bar_w, bar_h = DEFAULT_BAR
    rows = list(range(0, region.y - bar_h + 1)) + list(range(region.y + region.height,
                                                             geometry.height - bar_h + 1))
    if not rows:
        rows = list(range(0, max(1, geometry.height - bar_h + 1)))
    start_y = float(rows[int(rng.integers(len(rows)))])
    start_x = -bar_w + float(rng.uniform(1.0, 8.0))
    velocity = (geometry.width + bar_w) / duration if duration > 0 else 0.0
    foreground = ForegroundModel(bar_w, bar_h, start_x, start_y, velocity, 0.0, 0.5)

    return SyntheticScene(geometry=geometry, duration=duration, flicker=flicker,
                          foreground=foreground, contrast=0.1, simulation_rate=10000.0, seed=seed)


def _floats(text: str, count: int, key: str) -> List[float]:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise SceneError(f"Invalid value for '{key}': {text}")
    if len(values) != count:
        raise SceneError(f"'{key}' expects {count} comma-separated values, got {len(values)}")
    return values


def _harmonics(text: str) -> Tuple[Harmonic, ...]:
    if text.strip().lower() in ("", "none"):
        return ()
    harmonics = []
    for item in text.split(","):
        parts = item.strip().split(":")
        if len(parts) != 3:
            raise SceneError(f"Harmonic '{item.strip()}' must be k:a:b")
        try:
            harmonics.append(Harmonic(int(parts[0]), float(parts[1]), float(parts[2])))
        except ValueError:
            raise SceneError(f"Invalid harmonic '{item.strip()}'")
    return tuple(harmonics)


def parse_scene(text: Union[str, Iterable[str]]) -> SyntheticScene:
    """
    Parse a scene file.

    Keys: width, height, duration, contrast, simulation_rate, seed,
    noise_rate, supply_frequency, dc_level, harmonics (k:a:b list),
    flicker_region (x,y,w,h), foreground ('none' or w,h),
    foreground_start (x,y), foreground_velocity (vx,vy), edge_contrast.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    values: Dict[str, str] = {}
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SceneError(f"Line {number}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in SCENE_KEYS:
            raise SceneError(f"Line {number}: unknown key '{key}'")
        values[key] = value

    try:
        geometry = SensorGeometry(int(values.get("width", DEFAULT_WIDTH)),
                                  int(values.get("height", DEFAULT_HEIGHT)))
        duration = float(values.get("duration", 1.5))
        contrast = float(values.get("contrast", 0.1))
        simulation_rate = float(values.get("simulation_rate", 10000.0))
        seed = int(values.get("seed", 0))
        noise_rate = float(values.get("noise_rate", 0.0))
        supply = float(values.get("supply_frequency", 50.0))
        dc_level = float(values.get("dc_level", 0.0))
        region = Rect.parse(values["flicker_region"]) if "flicker_region" in values else Rect(0, 0, 0, 0)
    except (ValueError, EventStreamError) as e:
        raise SceneError(f"Invalid scene value: {e}")

    flicker = FlickerModel(supply, _harmonics(values.get("harmonics", "")), region, dc_level)

    foreground = None
    shape = values.get("foreground", "none").strip().lower()
    if shape != "none":
        width, height = _floats(shape, 2, "foreground")
        start = _floats(values.get("foreground_start", "0,0"), 2, "foreground_start")
        velocity = _floats(values.get("foreground_velocity", "0,0"), 2, "foreground_velocity")
        edge = float(values.get("edge_contrast", 0.5))
        foreground = ForegroundModel(int(width), int(height), start[0], start[1],
                                     velocity[0], velocity[1], edge)

    scene = SyntheticScene(geometry, duration, flicker, foreground, contrast,
                           simulation_rate, seed, noise_rate)
    scene.validate()
    return scene


SCENE_KEYS = (
    "width", "height", "duration", "contrast", "simulation_rate", "seed", "noise_rate",
    "supply_frequency", "dc_level", "harmonics", "flicker_region",
    "foreground", "foreground_start", "foreground_velocity", "edge_contrast",
)


def dump_scene(scene: SyntheticScene) -> str:
    """Render a scene in the key-value format read by parse_scene"""
    flicker = scene.flicker
    harmonics = ", ".join(f"{h.k}:{h.a!r}:{h.b!r}" for h in flicker.harmonics) or "none"
    lines = [
        f"width = {scene.geometry.width}",
        f"height = {scene.geometry.height}",
        f"duration = {scene.duration!r}",
        f"contrast = {scene.contrast!r}",
        f"simulation_rate = {scene.simulation_rate!r}",
        f"seed = {scene.seed}",
        f"noise_rate = {scene.noise_rate!r}",
        f"supply_frequency = {flicker.supply_frequency!r}",
        f"dc_level = {flicker.dc_level!r}",
        f"harmonics = {harmonics}",
        f"flicker_region = {flicker.region}",
    ]
    fg = scene.foreground
    if fg is None:
        lines.append("foreground = none")
    else:
        lines.extend([
            f"foreground = {fg.width},{fg.height}",
            f"foreground_start = {fg.start_x!r},{fg.start_y!r}",
            f"foreground_velocity = {fg.velocity_x!r},{fg.velocity_y!r}",
            f"edge_contrast = {fg.edge_contrast!r}",
        ])
    return "".join(line + "\n" for line in lines)


def load_scene_file(path: Union[str, Path]) -> SyntheticScene:
    path = Path(path)
    logger.info(f"📂 Loading scene from {path}")
    return parse_scene(path.read_text(encoding="utf-8"))


def dump_scene_file(scene: SyntheticScene, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_scene(scene), encoding="utf-8")


def with_overrides(scene: SyntheticScene, seed: Optional[int] = None,
                   duration: Optional[float] = None) -> SyntheticScene:
    """Copy of the scene with seed and/or duration replaced"""
    changes: Dict[str, Any] = {}
    if seed is not None:
        changes["seed"] = seed
    if duration is not None:
        changes["duration"] = duration
    return replace(scene, **changes) if changes else scene
