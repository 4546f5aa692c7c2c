"""
Evaluation Metrics Module

Foreground-to-flicker SNR, relative SNR improvement, flicker fraction and
per-pixel event rate maps.
"""

from .snr import MetricsError, SnrReport, snr, snr_improvement, flicker_fraction
from .rate_map import RateMap, rate_map, rate_map_csv, rate_map_pgm, DEFAULT_WINDOW

__all__ = [
    "MetricsError",
    "SnrReport",
    "snr",
    "snr_improvement",
    "flicker_fraction",
    "RateMap",
    "rate_map",
    "rate_map_csv",
    "rate_map_pgm",
    "DEFAULT_WINDOW",
]
