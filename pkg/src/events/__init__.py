"""
Event Stream Module

Event-camera data types and the plain-text "t x y p" event format, with
label sidecar files for synthetic ground truth.
"""

from .model import (
    Event, Label, LabeledEvent, SensorGeometry, Rect,
    EventStreamError, ParseError, GeometryError, check_event,
)
from .io import (
    EventStream, MonotoneReport,
    parse_event_line, parse_stream, serialize_event, serialize_stream, validate_monotone,
    read_stream, write_stream, parse_labels, serialize_labels, read_labels, write_labels,
    check_labels,
)

__all__ = [
    "Event",
    "Label",
    "LabeledEvent",
    "SensorGeometry",
    "Rect",
    "EventStreamError",
    "ParseError",
    "GeometryError",
    "check_event",
    "EventStream",
    "MonotoneReport",
    "parse_event_line",
    "parse_stream",
    "serialize_event",
    "serialize_stream",
    "validate_monotone",
    "read_stream",
    "write_stream",
    "parse_labels",
    "serialize_labels",
    "read_labels",
    "write_labels",
    "check_labels",
]
