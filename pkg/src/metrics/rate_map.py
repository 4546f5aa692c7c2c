"""
Event Rate Maps

Per-pixel event rates over a short window, exported as CSV or binary PGM.
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from events import Event, SensorGeometry

from .snr import MetricsError

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 0.03


@dataclass
class RateMap:
    """counts[y, x] events in [t_start, t_start + duration); rates = counts / duration"""
    counts: np.ndarray
    t_start: float
    duration: float

    @property
    def rates(self) -> np.ndarray:
        return self.counts / self.duration

    @property
    def total_events(self) -> int:
        return int(self.counts.sum())

    @property
    def shape(self) -> Tuple[int, int]:
        return self.counts.shape

    def argmax(self) -> Tuple[int, int]:
        """(x, y) of the busiest pixel"""
        y, x = np.unravel_index(int(np.argmax(self.counts)), self.counts.shape)
        return int(x), int(y)

    def rate_at(self, x: int, y: int) -> float:
        return float(self.rates[y, x])


def rate_map(events: Sequence[Event], geometry: SensorGeometry, t_start: float = 0.0,
             duration: float = DEFAULT_WINDOW) -> RateMap:
    """Count events per pixel inside [t_start, t_start + duration)"""
    if not duration > 0:
        raise MetricsError(f"Rate map window must be positive, got {duration}")
    t_end = t_start + duration
    counts = np.zeros((geometry.height, geometry.width), dtype=np.int64)
    selected = [(event.y, event.x) for event in events if t_start <= event.t < t_end]
    if selected:
        index = np.asarray(selected, dtype=np.int64)
        inside = ((index[:, 0] < geometry.height) & (index[:, 1] < geometry.width))
        if not inside.all():
            raise MetricsError(f"Events outside {geometry} geometry")
        np.add.at(counts, (index[:, 0], index[:, 1]), 1)
    logger.debug(f"Rate map [{t_start}, {t_end}): {len(selected)} events")
    return RateMap(counts, t_start, duration)


def rate_map_csv(rate: RateMap, header: Sequence[str] = ()) -> str:
    """Row-major rates, one sensor row per line"""
    lines = [line if line.startswith("#") else f"# {line}" for line in header]
    for row in rate.rates:
        lines.append(",".join(repr(float(value)) for value in row))
    return "".join(line + "\n" for line in lines)


def rate_map_pgm(rate: RateMap, header: Sequence[str] = ()) -> bytes:
    """8-bit binary PGM (P5), rates scaled linearly to [0, 255] by the map maximum"""
    height, width = rate.shape
    peak = rate.counts.max() if rate.counts.size else 0
    if peak > 0:
        pixels = np.rint(rate.counts * (255.0 / peak)).astype(np.uint8)
    else:
        pixels = np.zeros((height, width), dtype=np.uint8)
    comments = [line.lstrip("#").strip() for line in header]
    comments.append(f"max_rate={float(peak) / rate.duration!r}")
    head = "P5\n" + "".join(f"# {line}\n" for line in comments) + f"{width} {height}\n255\n"
    return head.encode("ascii") + pixels.tobytes()
