"""
Tests for the per-pixel comb cascade, the filter bank and the dense oracle
"""

import unittest
import random
import sys
import os

import numpy as np

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from events import Event, GeometryError, SensorGeometry, validate_monotone
from synth import level_crossings
from comb import (
    FilterConfig, FilterError, ConfigError, MonotonicityError,
    DeltaKind, ScheduledDelta, PixelFilterState,
    apply_input_step, mature_until, sample,
    FilterBank, filter_stream, trace_pixel, shard_events, dense_oracle, grid_ratio,
)


def signed_sum(events):
    return sum(event.polarity for event in events)


def by_pixel(events):
    grouped = {}
    for event in events:
        grouped.setdefault(event.pixel, []).append((event.t, event.polarity))
    return grouped


class TestFilterConfig(unittest.TestCase):
    """Test configuration defaults and validation"""

    def test_defaults_from_base_frequency(self):
        """Test f0 = 50 Hz derives the documented delays and gains"""
        config = FilterConfig.from_base_frequency(50.0)
        self.assertAlmostEqual(config.tau1, 0.02)
        self.assertAlmostEqual(config.tau2, 0.002)
        self.assertAlmostEqual(config.rho1, 0.6)
        self.assertAlmostEqual(config.rho2, 0.96)
        self.assertEqual(config.sampler_threshold, config.contrast)
        self.assertAlmostEqual(config.tuning_residual, 0.0, places=15)
        self.assertAlmostEqual(config.dc_gain, 1.0, places=12)

    def test_lattice(self):
        """Test tick lattice and lags"""
        config = FilterConfig.from_base_frequency(50.0)
        self.assertAlmostEqual(config.tick, 1e-4)
        self.assertEqual(config.lag_short, 20)
        self.assertEqual(config.lag_long, 200)
        self.assertEqual(config.lag_sum, 220)
        self.assertEqual(config.to_tick(0.0021), 21)
        self.assertEqual(config.to_tick(0.002), 20)
        self.assertAlmostEqual(config.to_time(20), 0.002)
        self.assertAlmostEqual(config.drain_horizon, 0.1)

    def test_invalid_parameters(self):
        """Test constraint violations raise ConfigError"""
        with self.assertRaises(ConfigError):
            FilterConfig.from_base_frequency(50.0, rho1=1.0)
        with self.assertRaises(ConfigError):
            FilterConfig.from_base_frequency(-1.0)
        with self.assertRaises(ConfigError):
            FilterConfig.from_base_frequency(50.0, contrast=0.0)
        with self.assertRaises(ConfigError):
            FilterConfig.from_base_frequency(50.0, tau_ratio=1)
        with self.assertRaises(ConfigError):
            FilterConfig(base_frequency=50.0, tau1=0.02, tau2=0.003)
        with self.assertRaises(ConfigError):
            FilterConfig(base_frequency=50.0, tau1=0.02, tau2=0.002, prune_epsilon=-1.0)
        self.assertTrue(issubclass(ConfigError, FilterError))

    def test_dict_round_trip(self):
        """Test to_dict/from_dict"""
        config = FilterConfig.from_base_frequency(60.0, rho1=0.7, contrast=0.1)
        self.assertEqual(FilterConfig.from_dict(config.to_dict()), config)


class TestPixelCascade(unittest.TestCase):
    """Test apply_input_step, mature_until and sample on one pixel"""

    def setUp(self):
        """Set up default configuration and a fresh pixel"""
        self.config = FilterConfig.from_base_frequency(50.0)
        self.state = PixelFilterState(pixel=(0, 0))

    def test_first_step(self):
        """Test a step on a fresh state passes straight through"""
        step = apply_input_step(self.state, 0, 1.0, self.config)
        self.assertEqual(step.dy, 1.0)
        self.assertEqual(self.state.y_now, 1.0)
        self.assertEqual(self.state.pending, 6)

    def test_short_delay_change(self):
        """Test the first matured change: -rho2 + 1 = 0.04"""
        apply_input_step(self.state, 0, 1.0, self.config)
        changes = mature_until(self.state, self.config.to_tick(0.003), self.config)
        self.assertEqual(len(changes), 1)
        self.assertEqual(changes[0].tick, 20)
        self.assertAlmostEqual(changes[0].dy, 0.04, places=12)
        self.assertAlmostEqual(self.state.y_now, 1.04, places=12)

    def test_output_delta_children(self):
        """Test a matured output delta schedules gains 1, rho1, -rho1"""
        self.state.schedule(ScheduledDelta(20, 0.04, DeltaKind.OUTPUT), 20, self.config)
        changes = mature_until(self.state, self.config.to_tick(0.003), self.config)
        self.assertEqual([(c.tick, round(c.dy, 12)) for c in changes], [(20, 0.04)])
        self.assertEqual(list(self.state.short), [ScheduledDelta(40, 0.04, DeltaKind.OUTPUT)])
        self.assertEqual(self.state.long[0].due, 220)
        self.assertAlmostEqual(self.state.long[0].amplitude, 0.024)
        self.assertEqual(self.state.combined[0].due, 240)
        self.assertAlmostEqual(self.state.combined[0].amplitude, -0.024)

    def test_mature_without_pending(self):
        """Test maturing an idle state changes nothing"""
        self.assertEqual(mature_until(self.state, 10000, self.config), [])
        self.assertEqual(self.state.y_now, 0.0)
        self.assertEqual(self.state.last_update, -1)

    def test_pruned_delta_has_no_children(self):
        """Test deltas below the amplitude floor are applied but not propagated"""
        config = FilterConfig.from_base_frequency(50.0, prune_epsilon=0.1)
        self.state.schedule(ScheduledDelta(20, 0.05, DeltaKind.OUTPUT), 20, config)
        changes = mature_until(self.state, 100, config)
        self.assertEqual(len(changes), 1)
        self.assertAlmostEqual(self.state.y_now, 0.05)
        self.assertEqual(self.state.pending, 0)

    def test_dc_gain(self):
        """Test the step response settles at the step size"""
        apply_input_step(self.state, 0, 1.0, self.config)
        mature_until(self.state, self.config.to_tick(2.0), self.config)
        self.assertAlmostEqual(self.state.y_now, 1.0, delta=1e-3)

    def test_non_monotone_input(self):
        """Test an input earlier than the last update is rejected"""
        apply_input_step(self.state, 0, 1.0, self.config)
        mature_until(self.state, 30, self.config)
        with self.assertRaises(MonotonicityError):
            apply_input_step(self.state, 10, 1.0, self.config)

    def test_unmatured_input_rejected(self):
        """Test pending deltas must be matured before a later input"""
        apply_input_step(self.state, 0, 1.0, self.config)
        with self.assertRaises(FilterError):
            apply_input_step(self.state, 50, 1.0, self.config)
        with self.assertRaises(FilterError):
            apply_input_step(self.state, 0, 0.0, self.config)

    def test_same_tick_deltas_merge_with_input(self):
        """Test deltas due on the input tick are absorbed into one change"""
        apply_input_step(self.state, 0, 1.0, self.config)
        mature_until(self.state, 19, self.config)
        step = apply_input_step(self.state, 20, -1.0, self.config)
        self.assertAlmostEqual(step.dy, -1.0 + 0.04, places=12)

    def test_sampler_floor_semantics(self):
        """Test multi-threshold jumps and the residual reference"""
        config = FilterConfig.from_base_frequency(50.0, contrast=1.0)
        self.assertEqual(sample(self.state, 0, config, 2.5), [1, 1])
        self.assertEqual(self.state.ref, 2.0)
        self.assertEqual(sample(self.state, 1, config, 0.4), [-1])
        self.assertEqual(self.state.ref, 1.0)

    def test_sampler_reference_stays_on_threshold_lattice(self):
        """Test a long run of single steps leaves the reference at an exact multiple"""
        config = FilterConfig.from_base_frequency(50.0, contrast=0.1)
        for k in range(1, 1001):
            self.assertEqual(sample(self.state, k, config, (k + 0.5) * 0.1), [1], k)
        self.assertEqual(self.state.level, 1000)
        self.assertEqual(self.state.ref, 1000 * 0.1)

    def test_sampler_below_threshold(self):
        """Test a sub-threshold change emits nothing"""
        self.assertEqual(sample(self.state, 0, self.config, 0.5), [])
        self.assertEqual(self.state.ref, 0.0)


class TestDenseOracle(unittest.TestCase):
    """Test the lfilter reference"""

    def setUp(self):
        """Set up default configuration"""
        self.config = FilterConfig.from_base_frequency(50.0)

    def test_zero_input(self):
        """Test zero input gives zero output"""
        y = dense_oracle([], [], self.config, 1e-4, 0.1)
        self.assertEqual(len(y), 1001)
        self.assertTrue(np.all(y == 0))

    def test_grid_must_divide_delays(self):
        """Test a grid that does not divide tau2"""
        with self.assertRaises(FilterError):
            dense_oracle([0.0], [1], self.config, 3e-4, 0.1)
        self.assertEqual(grid_ratio(self.config, 1e-4), 20)

    def test_single_step_matches_event_driven_trace(self):
        """Test the oracle staircase equals the event-driven one at every change"""
        changes = trace_pixel([Event(0.0, 0, 0, 1)], self.config, 5000)
        oracle = dense_oracle([0.0], [1], self.config, self.config.tick, 0.5)
        for change in changes:
            self.assertAlmostEqual(change.y, oracle[change.tick], delta=1e-9)
        self.assertAlmostEqual(oracle[20], 1.04, places=12)


class TestFilterStream(unittest.TestCase):
    """Test whole-stream filtering"""

    def setUp(self):
        """Set up default configuration"""
        self.config = FilterConfig.from_base_frequency(50.0)
        self.geometry = SensorGeometry(8, 8)

    def random_stream(self, seed, count=300, pixels=6, duration=0.3):
        rng = random.Random(seed)
        ticks = sorted(rng.randrange(int(duration / self.config.tick)) for _ in range(count))
        return [Event(tick * self.config.tick, rng.randrange(pixels), rng.randrange(pixels),
                      rng.choice((-1, 1))) for tick in ticks]

    def test_empty(self):
        """Test empty input gives empty output"""
        self.assertEqual(filter_stream([], self.geometry, self.config), [])

    def test_off_lattice_input_keeps_its_timestamp(self):
        """Test an input rounded down to a tick still emits at its own time"""
        output = filter_stream([Event(0.00004, 0, 0, 1)], SensorGeometry(1, 1), self.config)
        self.assertEqual(output[0], Event(0.00004, 0, 0, 1))

        slow = FilterConfig.from_base_frequency(1.0)
        output = filter_stream([Event(0.0024, 0, 0, 1)], SensorGeometry(1, 1), slow)
        self.assertEqual(output[0].t, 0.0024)

    def test_no_output_before_first_input_of_pixel(self):
        """Test every output event is at or after the earliest input on its pixel"""
        rng = random.Random(9)
        events = sorted((Event(rng.uniform(0.0, 0.3), rng.randrange(4), rng.randrange(4),
                               rng.choice((-1, 1))) for _ in range(400)), key=lambda e: e.t)
        first = {}
        for event in events:
            first.setdefault(event.pixel, event.t)
        for config in (self.config, FilterConfig.from_base_frequency(2.0)):
            output = filter_stream(events, self.geometry, config)
            self.assertTrue(validate_monotone(output).ok)
            for event in output:
                self.assertGreaterEqual(event.t, first[event.pixel], event)

    def test_single_event_net_count(self):
        """Test one event leaves exactly one net +1 event"""
        output = filter_stream([Event(0.0, 1, 1, 1)], self.geometry, self.config)
        self.assertEqual(signed_sum(output), 1)
        self.assertTrue(all(event.pixel == (1, 1) for event in output))

    def test_square_wave_suppressed(self):
        """Test a 100 Hz event square wave is cut by at least 90% after 0.2 s"""
        events = [Event(k * 0.005, 0, 0, 1 if k % 2 == 0 else -1) for k in range(201)]
        output = filter_stream(events, self.geometry, self.config)
        window_in = [e for e in events if 0.2 <= e.t < 1.0]
        window_out = [e for e in output if 0.2 <= e.t < 1.0]
        self.assertLessEqual(len(window_out), 0.1 * len(window_in))

    def test_harmonic_sinusoids_notched(self):
        """Test the steady-state staircase keeps under 5% of a sine at k * f0"""
        config = FilterConfig.from_base_frequency(50.0, contrast=0.05)
        rate = 20000.0
        t = np.arange(int(rate) + 1) / rate
        grid = np.arange(config.to_tick(0.5), config.to_tick(1.0))
        for k in range(1, 6):
            f = 50.0 * k
            times, polarities, _ = level_crossings(t, np.sin(2 * np.pi * f * t), config.contrast)
            events = [Event(float(ti), 0, 0, int(p)) for ti, p in zip(times, polarities)]
            changes = trace_pixel(events, config, config.to_tick(1.0))
            ticks = np.array([change.tick for change in changes])
            values = np.array([change.y for change in changes])
            y = values[np.searchsorted(ticks, grid, side='right') - 1]
            phase = 2 * np.pi * f * grid * config.tick
            basis = np.column_stack([np.sin(phase), np.cos(phase), np.ones_like(phase)])
            coefficients, *_ = np.linalg.lstsq(basis, y, rcond=None)
            self.assertLessEqual(np.hypot(coefficients[0], coefficients[1]), 0.05, k)

    def test_output_is_valid_stream(self):
        """Test output is sorted by (t, y, x) and inside the geometry"""
        output = filter_stream(self.random_stream(1), self.geometry, self.config)
        self.assertTrue(validate_monotone(output).ok)
        keys = [(e.t, e.y, e.x) for e in output]
        self.assertEqual(keys, sorted(keys))
        self.assertTrue(all(self.geometry.contains(e.x, e.y) for e in output))

    def test_sampler_invariant(self):
        """Test |y_now - ref| < theta for every pixel after a run"""
        bank = FilterBank(self.geometry, self.config)
        for event in self.random_stream(2):
            bank.push(event)
            state = bank.states[event.pixel]
            self.assertLess(abs(state.y_now - state.ref), self.config.sampler_threshold)
        bank.drain(bank.current_tick + 1000)
        for state in bank.states.values():
            self.assertLess(abs(state.y_now - state.ref), self.config.sampler_threshold)

    def test_linearity_over_disjoint_pixels(self):
        """Test filtering a merge equals merging the filtered parts"""
        left = [e for e in self.random_stream(3) if e.x < 3]
        right = [e for e in self.random_stream(4) if e.x >= 3]
        merged = sorted(left + right, key=lambda e: e.t)
        end = max(e.t for e in merged) + 0.1
        whole = filter_stream(merged, self.geometry, self.config, end_time=end)
        parts = (filter_stream(left, self.geometry, self.config, end_time=end)
                 + filter_stream(right, self.geometry, self.config, end_time=end))
        self.assertEqual(by_pixel(whole), by_pixel(parts))

    def test_pixel_independence(self):
        """Test permuting same-time events of different pixels changes nothing per pixel"""
        events = [Event(0.001 * (k // 4), k % 4, 0, 1 if (k // 4) % 2 == 0 else -1) for k in range(80)]
        shuffled = []
        for start in range(0, len(events), 4):
            group = events[start:start + 4]
            shuffled.extend(reversed(group))
        a = filter_stream(events, self.geometry, self.config)
        b = filter_stream(shuffled, self.geometry, self.config)
        self.assertEqual(by_pixel(a), by_pixel(b))

    def test_worker_count_does_not_change_output(self):
        """Test identical output with 1, 2 and 8 workers"""
        events = self.random_stream(5, count=400, pixels=8)
        reference = filter_stream(events, self.geometry, self.config, workers=1)
        for workers in (2, 8):
            self.assertEqual(filter_stream(events, self.geometry, self.config, workers=workers),
                             reference)

    def test_shards_partition_pixels(self):
        """Test round-robin shards keep each pixel in one shard"""
        events = self.random_stream(6)
        shards = shard_events(events, 3)
        self.assertEqual(sum(len(s) for s in shards), len(events))
        owners = {}
        for index, shard in enumerate(shards):
            for event in shard:
                self.assertEqual(owners.setdefault(event.pixel, index), index)

    def test_pixel_order_violation(self):
        """Test a pixel going back in time is reported with its index"""
        events = [Event(0.2, 1, 1, 1), Event(0.1, 2, 2, 1), Event(0.1, 1, 1, -1)]
        with self.assertRaises(MonotonicityError) as ctx:
            filter_stream(events, self.geometry, self.config)
        self.assertEqual(ctx.exception.index, 2)
        self.assertEqual(ctx.exception.pixel, (1, 1))

    def test_out_of_geometry_pixel(self):
        """Test events outside the geometry are rejected"""
        with self.assertRaises(GeometryError):
            filter_stream([Event(0.0, 9, 0, 1)], self.geometry, self.config)

    def test_queues_drain_with_pruning(self):
        """Test all scheduled deltas die out after a long drain"""
        bank = FilterBank(self.geometry, self.config)
        for event in self.random_stream(7, count=50):
            bank.push(event)
        bank.drain(self.config.to_tick(3.0))
        self.assertEqual(bank.pending_deltas, 0)


if __name__ == '__main__':
    unittest.main()
