"""
Comb Filter Module

Event-driven flicker removal: a feed-forward/feedback comb cascade run per
pixel on integer-tick delay lines, a threshold sampler that turns the
filtered staircase back into events, and a dense-grid reference oracle.
"""

from .config import FilterConfig, FilterError, ConfigError, MonotonicityError
from .core import (
    DeltaKind, ScheduledDelta, Change, StepSummary, PixelFilterState,
    apply_input_step, mature_until, sample,
)
from .bank import FilterBank, filter_stream, trace_pixel, check_pixel_order, shard_events, event_order
from .oracle import dense_oracle, comb_coefficients, grid_ratio, staircase_input

__all__ = [
    "FilterConfig",
    "FilterError",
    "ConfigError",
    "MonotonicityError",
    "DeltaKind",
    "ScheduledDelta",
    "Change",
    "StepSummary",
    "PixelFilterState",
    "apply_input_step",
    "mature_until",
    "sample",
    "FilterBank",
    "filter_stream",
    "trace_pixel",
    "check_pixel_order",
    "shard_events",
    "event_order",
    "dense_oracle",
    "comb_coefficients",
    "grid_ratio",
    "staircase_input",
]
