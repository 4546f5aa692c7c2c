"""
Event Stream Text Format

One event per line, "t x y p" separated by whitespace: t in seconds,
x/y integer pixel coordinates, p in {0, 1} (0 = OFF, 1 = ON). Blank lines
and lines starting with '#' are skipped. Label sidecar files hold one
label token per event line.
"""

import math
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, NamedTuple, Optional, Sequence, Union

from .model import Event, EventStreamError, Label, ParseError, SensorGeometry

logger = logging.getLogger(__name__)

Source = Union[str, Iterable[str]]


@dataclass
class EventStream:
    """Parsed event file with provenance of every accepted line"""
    events: List[Event] = field(default_factory=list)
    geometry: Optional[SensorGeometry] = None
    line_numbers: List[int] = field(default_factory=list)
    comment_lines: int = 0
    blank_lines: int = 0
    errors: List[ParseError] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.events)

    @property
    def line_count(self) -> int:
        return len(self.events) + len(self.errors) + self.comment_lines + self.blank_lines


class MonotoneReport(NamedTuple):
    """Result of validate_monotone; index is the first offending event"""
    ok: bool
    index: Optional[int] = None
    previous: Optional[float] = None
    current: Optional[float] = None


def _lines(source: Source) -> Iterable[str]:
    if isinstance(source, str):
        return source.splitlines()
    return source


def parse_event_line(line: str, line_number: int,
                     geometry: Optional[SensorGeometry] = None) -> Event:
    """Parse a single 't x y p' line into an Event (polarity mapped to +/-1)"""
    tokens = line.split()
    if len(tokens) != 4:
        raise ParseError(line_number, f"expected 4 fields, got {len(tokens)}")

    try:
        t = float(tokens[0])
    except ValueError:
        raise ParseError(line_number, f"malformed timestamp '{tokens[0]}'")
    if not math.isfinite(t):
        raise ParseError(line_number, f"non-finite timestamp '{tokens[0]}'")
    if t < 0:
        raise ParseError(line_number, f"negative timestamp {tokens[0]}")

    try:
        x = int(tokens[1])
        y = int(tokens[2])
    except ValueError:
        raise ParseError(line_number, f"malformed pixel '{tokens[1]} {tokens[2]}'")
    if x < 0 or y < 0:
        raise ParseError(line_number, f"negative pixel ({x}, {y})")
    if geometry is not None and not geometry.contains(x, y):
        raise ParseError(line_number, f"pixel ({x}, {y}) outside {geometry} geometry")

    if tokens[3] == "1":
        polarity = 1
    elif tokens[3] == "0":
        polarity = -1
    else:
        raise ParseError(line_number, f"invalid polarity '{tokens[3]}'")

    return Event(t, x, y, polarity)


def parse_stream(source: Source, geometry: Optional[SensorGeometry] = None,
                 strict: bool = True) -> EventStream:
    """
    Parse event text into an EventStream.

    Args:
        source: Whole text or an iterable of lines (e.g. an open file)
        geometry: Optional sensor geometry; pixels outside it are rejected
        strict: Raise on the first bad line; otherwise collect and skip

    Returns:
        EventStream in file order
    """
    stream = EventStream(geometry=geometry)
    for number, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line:
            stream.blank_lines += 1
            continue
        if line.startswith("#"):
            stream.comment_lines += 1
            continue
        try:
            event = parse_event_line(line, number, geometry)
        except ParseError as e:
            if strict:
                raise
            logger.warning(f"Skipping {e}")
            stream.errors.append(e)
            continue
        stream.events.append(event)
        stream.line_numbers.append(number)

    logger.debug(f"Parsed {len(stream.events)} events "
                 f"({stream.comment_lines} comments, {len(stream.errors)} rejected)")
    return stream


def serialize_event(event: Event) -> str:
    return f"{float(event.t)!r} {int(event.x)} {int(event.y)} {1 if event.polarity > 0 else 0}"


def serialize_stream(events: Iterable[Event], header: Sequence[str] = ()) -> str:
    """Render events (and optional '#' header lines) in the text format"""
    lines = [_comment(line) for line in header]
    lines.extend(serialize_event(event) for event in events)
    return "".join(line + "\n" for line in lines)


def _comment(line: str) -> str:
    return line if line.startswith("#") else f"# {line}"


def validate_monotone(events: Sequence[Event]) -> MonotoneReport:
    """Check that timestamps never decrease across the whole stream"""
    for index in range(1, len(events)):
        if events[index].t < events[index - 1].t:
            return MonotoneReport(False, index, events[index - 1].t, events[index].t)
    return MonotoneReport(True)


def read_stream(path: Union[str, Path], geometry: Optional[SensorGeometry] = None,
                strict: bool = True) -> EventStream:
    path = Path(path)
    logger.info(f"📂 Reading events from {path}")
    with path.open("r", encoding="utf-8") as handle:
        return parse_stream(handle, geometry, strict)


def write_stream(path: Union[str, Path], events: Iterable[Event],
                 header: Sequence[str] = ()) -> int:
    """Write events to path; returns the number of event lines written"""
    path = Path(path)
    count = 0
    with path.open("w", encoding="utf-8") as handle:
        for line in header:
            handle.write(_comment(line) + "\n")
        for event in events:
            handle.write(serialize_event(event) + "\n")
            count += 1
    logger.info(f"💾 Wrote {count} events to {path}")
    return count


def parse_labels(source: Source) -> List[Label]:
    """Parse a label sidecar (one 'flicker' / 'foreground' token per line)"""
    labels: List[Label] = []
    for number, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            labels.append(Label(line))
        except ValueError:
            raise ParseError(number, f"invalid label '{line}'")
    return labels


def serialize_labels(labels: Iterable[Label], header: Sequence[str] = ()) -> str:
    lines = [_comment(line) for line in header]
    lines.extend(Label(label).value for label in labels)
    return "".join(line + "\n" for line in lines)


def read_labels(path: Union[str, Path]) -> List[Label]:
    with Path(path).open("r", encoding="utf-8") as handle:
        return parse_labels(handle)


def write_labels(path: Union[str, Path], labels: Iterable[Label],
                 header: Sequence[str] = ()) -> None:
    Path(path).write_text(serialize_labels(labels, header), encoding="utf-8")


def check_labels(events: Sequence[Event], labels: Sequence[Label]) -> None:
    if len(events) != len(labels):
        raise EventStreamError(f"Label count {len(labels)} does not match event count {len(events)}")
