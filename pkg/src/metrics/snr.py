"""
Signal-to-Noise Metrics

SNR here is the count of foreground events divided by the count of flicker
events inside a time window. Events are classified by ground-truth labels
or, for filtered streams, by membership of the flicker region.
"""

import json
import math
import logging
from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional, Sequence, Union

from events import Event, Label, Rect

logger = logging.getLogger(__name__)


class MetricsError(Exception):
    """Base exception for evaluation metric errors"""
    pass


@dataclass(frozen=True)
class SnrReport:
    foreground_count: int
    flicker_count: int
    t_start: float = 0.0
    t_end: float = math.inf

    @property
    def snr(self) -> Optional[float]:
        """foreground / flicker, None when no flicker events were counted"""
        if self.flicker_count == 0:
            return None
        return self.foreground_count / self.flicker_count

    @property
    def defined(self) -> bool:
        return self.flicker_count > 0

    @property
    def window(self):
        return (self.t_start, self.t_end)

    @property
    def total(self) -> int:
        return self.foreground_count + self.flicker_count

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["snr"] = self.snr
        if math.isinf(self.t_end):
            data["t_end"] = None
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SnrReport':
        t_end = data.get("t_end")
        return cls(int(data["foreground_count"]), int(data["flicker_count"]),
                   float(data.get("t_start", 0.0)), math.inf if t_end is None else float(t_end))

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def snr(events: Sequence[Event], t_start: Optional[float] = None, t_end: Optional[float] = None,
        labels: Optional[Sequence[Label]] = None, region: Optional[Rect] = None) -> SnrReport:
    """
    Count foreground and flicker events in [t_start, t_end).

    Args:
        events: Event stream
        t_start: Window start (default: no lower bound)
        t_end: Window end, exclusive (default: no upper bound)
        labels: Ground-truth labels, one per event
        region: Flicker region; used when labels are not given

    Returns:
        SnrReport; its snr is None when the window holds no flicker events
    """
    if labels is None and region is None:
        raise MetricsError("SNR needs either labels or a flicker region")
    if labels is not None and len(labels) != len(events):
        raise MetricsError(f"Label count {len(labels)} does not match event count {len(events)}")
    start = -math.inf if t_start is None else t_start
    end = math.inf if t_end is None else t_end
    if end <= start:
        raise MetricsError(f"Empty SNR window [{start}, {end})")

    foreground = flicker = 0
    for index, event in enumerate(events):
        if not start <= event.t < end:
            continue
        if labels is not None:
            is_flicker = labels[index] == Label.FLICKER
        else:
            is_flicker = region.contains(event.x, event.y)
        if is_flicker:
            flicker += 1
        else:
            foreground += 1

    report = SnrReport(foreground, flicker, 0.0 if t_start is None else t_start, end)
    if not report.defined:
        logger.warning(f"No flicker events in window, SNR undefined ({foreground} foreground)")
    return report


def _snr_value(value: Union[SnrReport, float], name: str) -> float:
    snr_value = value.snr if isinstance(value, SnrReport) else value
    if snr_value is None or not math.isfinite(snr_value):
        raise MetricsError(f"{name} SNR is undefined")
    return float(snr_value)


def snr_improvement(raw: Union[SnrReport, float], filtered: Union[SnrReport, float]) -> float:
    """Relative improvement (filtered - raw) / raw"""
    raw_snr = _snr_value(raw, "Raw")
    filtered_snr = _snr_value(filtered, "Filtered")
    if raw_snr == 0:
        raise MetricsError("Raw SNR is zero, relative improvement undefined")
    return (filtered_snr - raw_snr) / raw_snr


def flicker_fraction(report: SnrReport) -> Optional[float]:
    """Share of flicker events among all counted events"""
    if report.total == 0:
        return None
    return report.flicker_count / report.total
