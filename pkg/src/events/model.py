"""
Event Model

Data types for event-camera streams: the brightness-change event itself,
the sensor geometry, rectangular pixel regions and ground-truth labels.
"""

import math
import logging
from enum import Enum
from dataclasses import dataclass, asdict
from typing import Any, Dict, Iterable, Iterator, NamedTuple, Optional, Tuple

logger = logging.getLogger(__name__)


class EventStreamError(Exception):
    """Base exception for event stream errors"""
    pass


class ParseError(EventStreamError):
    """A line of an event or label file could not be accepted"""

    def __init__(self, line: int, reason: str):
        super().__init__(line, reason)
        self.line = line
        self.reason = reason

    def __str__(self) -> str:
        return f"{self.reason}, line {self.line}"


class GeometryError(EventStreamError):
    """Invalid geometry or a pixel outside of it"""
    pass


class Event(NamedTuple):
    """One asynchronous brightness-change sample"""
    t: float
    x: int
    y: int
    polarity: int

    @property
    def pixel(self) -> Tuple[int, int]:
        return (self.x, self.y)


class Label(str, Enum):
    """Ground-truth origin of a synthetic event"""
    FLICKER = "flicker"
    FOREGROUND = "foreground"


class LabeledEvent(NamedTuple):
    event: Event
    label: Label


@dataclass(frozen=True)
class SensorGeometry:
    """Sensor size in pixels"""
    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise GeometryError(f"Invalid geometry {self.width}x{self.height}")

    def contains(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    @property
    def pixel_count(self) -> int:
        return self.width * self.height

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SensorGeometry':
        return cls(int(data["width"]), int(data["height"]))

    @classmethod
    def infer(cls, events: Iterable[Event]) -> 'SensorGeometry':
        """Smallest geometry holding every event (1x1 for an empty stream)"""
        width = height = 1
        for event in events:
            width = max(width, event.x + 1)
            height = max(height, event.y + 1)
        logger.warning(f"No geometry given, inferred {width}x{height} from events")
        return cls(width, height)

    def __str__(self) -> str:
        return f"{self.width}x{self.height}"


@dataclass(frozen=True)
class Rect:
    """Half-open pixel rectangle [x, x + width) x [y, y + height)"""
    x: int
    y: int
    width: int
    height: int

    def __post_init__(self):
        if self.width < 0 or self.height < 0:
            raise GeometryError(f"Negative rectangle size {self.width}x{self.height}")

    @property
    def area(self) -> int:
        return self.width * self.height

    def contains(self, x: int, y: int) -> bool:
        return self.x <= x < self.x + self.width and self.y <= y < self.y + self.height

    def within(self, geometry: SensorGeometry) -> bool:
        return (self.x >= 0 and self.y >= 0
                and self.x + self.width <= geometry.width
                and self.y + self.height <= geometry.height)

    def pixels(self) -> Iterator[Tuple[int, int]]:
        """Pixels in row-major order"""
        for y in range(self.y, self.y + self.height):
            for x in range(self.x, self.x + self.width):
                yield (x, y)

    @classmethod
    def parse(cls, text: str) -> 'Rect':
        """Parse 'x,y,width,height' (or 'x,y' for a single pixel)"""
        parts = [part.strip() for part in text.split(",")]
        try:
            values = [int(part) for part in parts]
        except ValueError:
            raise GeometryError(f"Invalid region '{text}': expected integers")
        if len(values) == 2:
            return cls(values[0], values[1], 1, 1)
        if len(values) != 4:
            raise GeometryError(f"Invalid region '{text}': expected x,y,width,height")
        return cls(*values)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Rect':
        return cls(int(data["x"]), int(data["y"]), int(data["width"]), int(data["height"]))

    def __str__(self) -> str:
        return f"{self.x},{self.y},{self.width},{self.height}"


def check_event(event: Event, geometry: Optional[SensorGeometry] = None) -> None:
    """Raise EventStreamError if the event violates the Event invariants"""
    if not math.isfinite(event.t) or event.t < 0:
        raise EventStreamError(f"Invalid timestamp {event.t!r}")
    if event.x < 0 or event.y < 0:
        raise GeometryError(f"Negative pixel coordinate ({event.x}, {event.y})")
    if event.polarity not in (-1, 1):
        raise EventStreamError(f"Invalid polarity {event.polarity!r}")
    if geometry is not None and not geometry.contains(event.x, event.y):
        raise GeometryError(f"Pixel ({event.x}, {event.y}) outside {geometry} geometry")
