"""
End-to-end acceptance checks

Analytic response identities, event-driven vs dense-grid agreement,
time/frequency consistency and the flicker suppression figures on the
default synthetic scene.
"""

import unittest
import math
import random
import sys
import os

import numpy as np

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from events import Event, SensorGeometry
from comb import FilterConfig, filter_stream, trace_pixel, dense_oracle
from spectral import (
    h_proposed, reconstruct_zoh, naive_dft, window_psd, attenuation_at, attenuation_profile,
)
from synth import default_scene, generate, level_crossings
from metrics import snr, snr_improvement


def omega(f):
    return 2 * math.pi * f


def sinusoid_events(frequency, contrast, duration=1.5, rate=20000.0):
    """Level-crossing events of a unit sine on pixel (0, 0)"""
    t = np.arange(int(round(duration * rate)) + 1) / rate
    times, polarities, _ = level_crossings(t, np.sin(2 * math.pi * frequency * t), contrast)
    return [Event(float(ti), 0, 0, int(p)) for ti, p in zip(times, polarities)]


def fitted_amplitude(events, frequency, contrast, t_start=0.5, t_end=1.5, rate=10000.0):
    """Least-squares sine amplitude of the reconstructed staircase"""
    signal = reconstruct_zoh(events, (0, 0), rate, t_start, t_end, contrast)
    t = t_start + np.arange(signal.size) / rate
    w = 2 * math.pi * frequency
    basis = np.column_stack([np.sin(w * t), np.cos(w * t), np.ones_like(t)])
    coefficients, *_ = np.linalg.lstsq(basis, signal, rcond=None)
    return float(np.hypot(coefficients[0], coefficients[1]))


class TestResponseIdentities(unittest.TestCase):
    """Test notches, DC gain and the cancelled singularity"""

    def setUp(self):
        """Set up default configuration"""
        self.config = FilterConfig.from_base_frequency(50.0)

    def test_harmonic_notches(self):
        """Test |H| vanishes at f0 and its multiples below 1/tau2"""
        for k in range(1, 10):
            self.assertLessEqual(abs(h_proposed(omega(50.0 * k), self.config)), 1e-9, k)

    def test_dc_gain(self):
        """Test |H| tends to 1 at low frequency"""
        self.assertAlmostEqual(abs(h_proposed(omega(1e-6), self.config)), 1.0, delta=1e-6)

    def test_short_delay_frequency(self):
        """Test unit gain at 1/tau2"""
        self.assertAlmostEqual(abs(h_proposed(omega(500.0), self.config)), 1.0, delta=1e-3)


class TestOracleEquivalence(unittest.TestCase):
    """Test the event-driven staircase against lfilter on a 10 kHz grid"""

    def test_random_single_pixel_streams(self):
        """Test 100 random streams of up to 200 events"""
        config = FilterConfig.from_base_frequency(50.0, prune_epsilon=0.0)
        rng = random.Random(2024)
        end_tick = 5000
        for trial in range(100):
            count = rng.randint(1, 200)
            ticks = sorted(rng.randrange(3000) for _ in range(count))
            events = [Event(tick * config.tick, 0, 0, rng.choice((-1, 1))) for tick in ticks]
            oracle = dense_oracle([e.t for e in events], [e.polarity for e in events], config,
                                  config.tick, config.to_time(end_tick))
            values = {}
            for change in trace_pixel(events, config, end_tick):
                values[change.tick] = change.y
            for tick, y in values.items():
                self.assertLessEqual(abs(y - oracle[tick]), 1e-6 * config.contrast, (trial, tick))


class TestFrequencyConsistency(unittest.TestCase):
    """Test steady-state event-domain gain against the analytic response"""

    CONTRAST = 0.05

    def gain(self, frequency):
        config = FilterConfig.from_base_frequency(50.0, contrast=self.CONTRAST)
        events = sinusoid_events(frequency, self.CONTRAST)
        output = filter_stream(events, SensorGeometry(1, 1), config)
        raw = fitted_amplitude(events, frequency, self.CONTRAST)
        filtered = fitted_amplitude(output, frequency, self.CONTRAST)
        return filtered / raw, abs(h_proposed(omega(frequency), config))

    def test_passband_frequencies(self):
        """Test 37 Hz and 230 Hz gains within 10%"""
        for frequency in (37.0, 230.0):
            measured, expected = self.gain(frequency)
            self.assertAlmostEqual(measured / expected, 1.0, delta=0.1, msg=frequency)

    def test_notched_frequency(self):
        """Test 100 Hz is removed"""
        measured, expected = self.gain(100.0)
        self.assertLess(expected, 1e-9)
        self.assertLessEqual(measured, 0.1)


class TestDefaultScene(unittest.TestCase):
    """Test suppression figures on the default 1.5 s scene"""

    @classmethod
    def setUpClass(cls):
        """Generate and filter the default scene once"""
        cls.scene = default_scene()
        cls.region = cls.scene.flicker.region
        cls.raw = generate(cls.scene)
        cls.config = FilterConfig.from_base_frequency(50.0, contrast=cls.scene.contrast)
        cls.filtered = filter_stream(cls.raw.events, cls.scene.geometry, cls.config, workers=4)

    def outside(self, events):
        return [e for e in events if not self.region.contains(e.x, e.y)]

    def test_attenuation_at_100hz(self):
        """Test at least 20 dB at 100 +/- 2 Hz over [0.2, 1.2)"""
        c = self.scene.contrast
        raw = window_psd(self.raw.events, self.region, 1000.0, 0.2, 1.2, c)
        filtered = window_psd(self.filtered, self.region, 1000.0, 0.2, 1.2, c)
        self.assertGreaterEqual(attenuation_at(raw, filtered, 100.0, 4.0), 20.0)

    def test_flicker_events_removed(self):
        """Test at least 80% fewer events in the flicker region"""
        remaining = sum(1 for e in self.filtered if self.region.contains(e.x, e.y))
        self.assertLessEqual(remaining, 0.2 * self.raw.flicker_count)

    def test_foreground_retained(self):
        """Test at least 70% of events outside the flicker region survive"""
        raw = len(self.outside(self.raw.events))
        self.assertGreater(raw, 0)
        self.assertGreaterEqual(len(self.outside(self.filtered)), 0.7 * raw)

    def test_convergence(self):
        """Test attenuation after settling beats the first 0.1 s by 10 dB"""
        profile = attenuation_profile(self.raw.events, self.filtered, self.region,
                                      [(0.0, 0.1), (0.3, 1.3)], 100.0, 4.0, 1000.0, self.scene.contrast)
        early, late = profile
        self.assertGreaterEqual(late.attenuation_db - early.attenuation_db, 10.0)

    def test_snr_improvement(self):
        """Test relative SNR improvement of at least 3"""
        raw = snr(self.raw.events, labels=self.raw.labels)
        filtered = snr(self.filtered, region=self.region)
        self.assertGreaterEqual(snr_improvement(raw, filtered), 3.0)

    def test_refiltering_removes_little(self):
        """Test a second pass removes under 5% of settled events before the input ends"""
        settle, last_input = 0.3, self.raw.events[-1].t
        second = filter_stream(self.filtered, self.scene.geometry, self.config, workers=4)
        first_count = sum(1 for e in self.filtered if settle <= e.t < last_input)
        second_count = sum(1 for e in second if settle <= e.t < last_input)
        self.assertGreater(first_count, 0)
        self.assertGreaterEqual(second_count, 0.95 * first_count)


class TestStructural(unittest.TestCase):
    """Test transform agreement and sharded determinism"""

    def test_naive_transform_agreement(self):
        """Test naive DFT vs FFT within 1e-9 relative at n = 1024"""
        rng = np.random.default_rng(11)
        x = rng.normal(size=1024)
        reference = np.fft.fft(x)
        error = np.max(np.abs(naive_dft(x) - reference)) / np.max(np.abs(reference))
        self.assertLessEqual(error, 1e-9)

    def test_sharded_scene_is_deterministic(self):
        """Test 1, 2 and 8 workers give identical output on a small scene"""
        scene = default_scene(SensorGeometry(8, 8), duration=0.3, seed=4)
        raw = generate(scene)
        config = FilterConfig.from_base_frequency(50.0, contrast=scene.contrast)
        reference = filter_stream(raw.events, scene.geometry, config, workers=1)
        for workers in (2, 8):
            self.assertEqual(filter_stream(raw.events, scene.geometry, config, workers=workers), reference)

    def test_table_arithmetic(self):
        """Test relative improvement arithmetic on known before/after pairs"""
        self.assertAlmostEqual(snr_improvement(0.19, 1.07), 4.63, delta=0.01)
        self.assertAlmostEqual(snr_improvement(0.24, 2.08), 7.67, delta=0.01)


if __name__ == '__main__':
    unittest.main()
