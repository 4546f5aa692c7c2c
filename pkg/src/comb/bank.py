"""
Filter Bank

Runs one comb cascade per pixel over a whole event stream and regenerates
the filtered event stream. Pixels are independent, so a stream can be
sharded by pixel across worker processes and merged back deterministically.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import Dict, List, Optional, Sequence, Tuple

from events import Event, GeometryError, SensorGeometry

from .config import FilterConfig, FilterError, MonotonicityError
from .core import Change, PixelFilterState, apply_input_step, mature_until, sample

logger = logging.getLogger(__name__)

Pixel = Tuple[int, int]


def event_order(event: Event) -> Tuple[float, int, int]:
    """Output sort key (t, y, x); sorting is stable so emission order breaks ties"""
    return (event.t, event.y, event.x)


class FilterBank:
    """Per-pixel comb filter states for one sensor"""

    def __init__(self, geometry: SensorGeometry, config: FilterConfig):
        self.geometry = geometry
        self.config = config
        self.states: Dict[Pixel, PixelFilterState] = {}
        self.current_tick: Optional[int] = None
        self.input_count = 0
        self.output_count = 0

    def _state(self, pixel: Pixel) -> PixelFilterState:
        state = self.states.get(pixel)
        if state is None:
            state = PixelFilterState(pixel=pixel)
            self.states[pixel] = state
        return state

    @property
    def pending_deltas(self) -> int:
        return sum(state.pending for state in self.states.values())

    def _emit(self, state: PixelFilterState, tick: int, y: float, out: List[Event],
              t: Optional[float] = None) -> None:
        polarities = sample(state, tick, self.config, y)
        if polarities:
            t = self.config.to_time(tick) if t is None else t
            x, y_pixel = state.pixel
            out.extend(Event(t, x, y_pixel, polarity) for polarity in polarities)
            self.output_count += len(polarities)

    def push(self, event: Event) -> List[Event]:
        """
        Feed one input event.

        The pixel's pending deltas are matured up to the tick before the event
        so that deltas due on the event's own tick merge with its step. Events
        from the step itself carry the input timestamp; delayed changes carry
        their lattice time.

        Returns:
            Output events generated up to and including the event's tick
        """
        if not self.geometry.contains(event.x, event.y):
            raise GeometryError(f"Pixel ({event.x}, {event.y}) outside {self.geometry} geometry")
        tick = self.config.to_tick(event.t)
        state = self._state(event.pixel)
        if tick < state.last_update:
            raise MonotonicityError(
                f"Event at t={event.t} precedes last update of pixel {event.pixel}",
                pixel=event.pixel, index=self.input_count)

        out: List[Event] = []
        for change in mature_until(state, tick - 1, self.config):
            self._emit(state, change.tick, change.y, out)
        step = apply_input_step(state, tick, event.polarity * self.config.contrast, self.config)
        # input-step events keep the input timestamp
        self._emit(state, tick, step.y, out, event.t)

        self.input_count += 1
        if self.current_tick is None or tick > self.current_tick:
            self.current_tick = tick
        return out

    def drain(self, end_tick: int) -> List[Event]:
        """Mature every pixel up to end_tick; output sorted by (t, y, x)"""
        out: List[Event] = []
        for pixel in sorted(self.states):
            state = self.states[pixel]
            for change in mature_until(state, end_tick, self.config):
                self._emit(state, change.tick, change.y, out)
        out.sort(key=event_order)
        self.current_tick = end_tick if self.current_tick is None else max(self.current_tick, end_tick)
        logger.debug(f"Drained {len(self.states)} pixels to tick {end_tick}, "
                     f"{self.pending_deltas} deltas still pending")
        return out


def check_pixel_order(events: Sequence[Event]) -> None:
    """Raise MonotonicityError if any pixel's events go back in time"""
    last: Dict[Pixel, float] = {}
    for index, event in enumerate(events):
        pixel = (event.x, event.y)
        previous = last.get(pixel)
        if previous is not None and event.t < previous:
            raise MonotonicityError(
                f"Event {index} at t={event.t} precedes t={previous} on pixel {pixel}",
                pixel=pixel, index=index)
        last[pixel] = event.t


def shard_events(events: Sequence[Event], workers: int) -> List[List[Event]]:
    """Split events round-robin by sorted pixel key, preserving order inside each shard"""
    pixels = sorted({(event.x, event.y) for event in events})
    owner = {pixel: position % workers for position, pixel in enumerate(pixels)}
    shards: List[List[Event]] = [[] for _ in range(min(workers, len(pixels)))]
    for event in events:
        shards[owner[(event.x, event.y)]].append(event)
    return shards


def _filter_shard(events: List[Event], geometry: SensorGeometry,
                  config: FilterConfig, end_tick: int) -> List[Event]:
    bank = FilterBank(geometry, config)
    out: List[Event] = []
    for event in events:
        out.extend(bank.push(event))
    out.extend(bank.drain(end_tick))
    return out


def filter_stream(events: Sequence[Event], geometry: SensorGeometry, config: FilterConfig,
                  workers: int = 1, drain: Optional[float] = None,
                  end_time: Optional[float] = None) -> List[Event]:
    """
    Filter a whole event stream.

    Args:
        events: Input events, nondecreasing in time per pixel
        geometry: Sensor geometry the events must fit
        config: Comb cascade parameters
        workers: Number of worker processes (1 runs inline)
        drain: Seconds to keep maturing after the last input (default config.drain_horizon)
        end_time: Absolute end time; overrides drain

    Returns:
        Filtered events sorted by (t, y, x)
    """
    if workers < 1:
        raise FilterError(f"workers must be >= 1, got {workers}")
    if not events:
        return []

    check_pixel_order(events)
    last_t = max(event.t for event in events)
    if end_time is None:
        end_time = last_t + (config.drain_horizon if drain is None else drain)
    if end_time < last_t:
        raise FilterError(f"End time {end_time} precedes last event at {last_t}")
    end_tick = config.to_tick(end_time)

    shards = shard_events(events, workers)
    logger.info(f"🔧 Filtering {len(events)} events on {sum(len(s) > 0 for s in shards)} shard(s), "
                f"draining to t={end_time:.4f}s")

    if len(shards) == 1:
        outputs = [_filter_shard(shards[0], geometry, config, end_tick)]
    else:
        with ProcessPoolExecutor(max_workers=len(shards)) as pool:
            outputs = list(pool.map(_filter_shard, shards, repeat(geometry),
                                    repeat(config), repeat(end_tick)))

    merged = [event for output in outputs for event in output]
    merged.sort(key=event_order)
    logger.info(f"✅ Filter produced {len(merged)} events from {len(events)} inputs")
    return merged


def trace_pixel(events: Sequence[Event], config: FilterConfig, end_tick: int) -> List[Change]:
    """
    Full staircase of one pixel: every input step and matured change up to end_tick.

    Events must all belong to the same pixel.
    """
    state = PixelFilterState(pixel=events[0].pixel if events else (0, 0))
    changes: List[Change] = []
    for event in events:
        if event.pixel != state.pixel:
            raise FilterError(f"trace_pixel got events for {event.pixel} and {state.pixel}")
        tick = config.to_tick(event.t)
        changes.extend(mature_until(state, tick - 1, config))
        step = apply_input_step(state, tick, event.polarity * config.contrast, config)
        changes.append(Change(step.tick, step.dy, step.y))
    changes.extend(mature_until(state, end_tick, config))
    return changes
