"""
Per-Pixel Comb Cascade

Event-driven realization of the combined feed-forward/feedback comb
recursion on one pixel. The input is integrated into a staircase; every
step change dx spawns delayed copies on three fixed-lag FIFOs (lags tau2,
tau1 and tau1 + tau2), and every output change dy does the same with the
feedback gains. Times are integer ticks of FilterConfig.tick.

    dy(t) = dx(t) - dx(t - tau1) - rho2 dx(t - tau2) + rho2 dx(t - tau1 - tau2)
            + rho1 dy(t - tau1) + dy(t - tau2) - rho1 dy(t - tau1 - tau2)
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Deque, List, NamedTuple, Optional, Tuple

from .config import FilterConfig, FilterError, MonotonicityError

logger = logging.getLogger(__name__)


class DeltaKind(str, Enum):
    INPUT = "input-path"
    OUTPUT = "output-path"


class ScheduledDelta(NamedTuple):
    """A delayed contribution to dy, due at an integer tick"""
    due: int
    amplitude: float
    kind: DeltaKind


class Change(NamedTuple):
    """One output change: tick, step dy and the staircase value after it"""
    tick: int
    dy: float
    y: float


class StepSummary(NamedTuple):
    tick: int
    dx: float
    dy: float
    y: float


@dataclass
class PixelFilterState:
    """Delay lines, output staircase and sampler reference of one pixel"""
    pixel: Tuple[int, int] = (0, 0)
    short: Deque[ScheduledDelta] = field(default_factory=deque)
    long: Deque[ScheduledDelta] = field(default_factory=deque)
    combined: Deque[ScheduledDelta] = field(default_factory=deque)
    y_now: float = 0.0
    level: int = 0
    ref: float = 0.0
    last_update: int = -1

    @property
    def queues(self) -> Tuple[Deque[ScheduledDelta], ...]:
        return (self.short, self.long, self.combined)

    @property
    def pending(self) -> int:
        return len(self.short) + len(self.long) + len(self.combined)

    def next_due(self) -> Optional[int]:
        heads = [queue[0].due for queue in self.queues if queue]
        return min(heads) if heads else None

    def schedule(self, delta: ScheduledDelta, lag: int, config: FilterConfig) -> None:
        """Append a delta to the FIFO of the given lag (in ticks)"""
        if lag == config.lag_short:
            queue = self.short
        elif lag == config.lag_long:
            queue = self.long
        elif lag == config.lag_sum:
            queue = self.combined
        else:
            raise FilterError(f"No delay line with lag {lag} ticks")
        if queue and queue[-1].due > delta.due:
            raise FilterError(f"Delta due at tick {delta.due} would unsort the lag-{lag} line")
        queue.append(delta)


def _pop_due(state: PixelFilterState, tick: int) -> float:
    """Remove every delta due exactly at tick and return their sum"""
    total = 0.0
    for queue in state.queues:
        while queue and queue[0].due == tick:
            total += queue.popleft().amplitude
    return total


def _schedule_input(state: PixelFilterState, tick: int, dx: float, config: FilterConfig) -> None:
    floor = config.prune_epsilon * config.contrast
    for lag, gain in ((config.lag_long, -1.0),
                      (config.lag_short, -config.rho2),
                      (config.lag_sum, config.rho2)):
        amplitude = gain * dx
        if amplitude and abs(amplitude) >= floor:
            state.schedule(ScheduledDelta(tick + lag, amplitude, DeltaKind.INPUT), lag, config)


def _schedule_output(state: PixelFilterState, tick: int, dy: float, config: FilterConfig) -> None:
    floor = config.prune_epsilon * config.contrast
    for lag, gain in ((config.lag_long, config.rho1),
                      (config.lag_short, 1.0),
                      (config.lag_sum, -config.rho1)):
        amplitude = gain * dy
        if amplitude and abs(amplitude) >= floor:
            state.schedule(ScheduledDelta(tick + lag, amplitude, DeltaKind.OUTPUT), lag, config)


def apply_input_step(state: PixelFilterState, tick: int, dx: float,
                     config: FilterConfig) -> StepSummary:
    """
    Apply an input staircase step dx at a tick.

    Deltas due at the same tick are absorbed into this change; anything due
    earlier must have been matured first.

    Returns:
        StepSummary with the resulting dy and y_now
    """
    if dx == 0:
        raise FilterError("Input step must be nonzero")
    if tick < state.last_update:
        raise MonotonicityError(
            f"Input at tick {tick} precedes last update {state.last_update} at pixel {state.pixel}",
            pixel=state.pixel)
    head = state.next_due()
    if head is not None and head < tick:
        raise FilterError(f"Deltas due at tick {head} not matured before input at tick {tick}")

    dy = dx + _pop_due(state, tick)
    _schedule_input(state, tick, dx, config)
    _schedule_output(state, tick, dy, config)
    state.y_now += dy
    state.last_update = tick
    return StepSummary(tick, dx, dy, state.y_now)


def mature_until(state: PixelFilterState, tick: int, config: FilterConfig) -> List[Change]:
    """Apply every pending delta due at or before tick, in time order"""
    changes: List[Change] = []
    while True:
        due = state.next_due()
        if due is None or due > tick:
            break
        dy = _pop_due(state, due)
        _schedule_output(state, due, dy, config)
        state.y_now += dy
        state.last_update = due
        changes.append(Change(due, dy, state.y_now))
    return changes


def sample(state: PixelFilterState, tick: int, config: FilterConfig,
           y: Optional[float] = None) -> List[int]:
    """
    Regenerate output events from the staircase value at a tick.

    Floor semantics: one event per whole threshold crossed, residual kept in
    the reference. The reference is an integer number of thresholds.
    """
    value = state.y_now if y is None else y
    threshold = config.sampler_threshold
    polarities: List[int] = []
    while value - state.ref >= threshold:
        state.level += 1
        state.ref = state.level * threshold
        polarities.append(1)
    while state.ref - value >= threshold:
        state.level -= 1
        state.ref = state.level * threshold
        polarities.append(-1)
    return polarities
