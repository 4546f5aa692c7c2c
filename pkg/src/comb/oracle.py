"""
Dense-Grid Oracle

Brute-force evaluation of the comb recursion on a uniform time grid with
scipy.signal.lfilter. Used as the reference for the event-driven path.
"""

import logging
from typing import Sequence, Tuple

import numpy as np
from scipy.signal import lfilter

from .config import FilterConfig, FilterError

logger = logging.getLogger(__name__)


def grid_ratio(config: FilterConfig, grid_dt: float) -> int:
    """Samples per tau2; raises FilterError unless grid_dt divides the delays"""
    if grid_dt <= 0:
        raise FilterError(f"Grid spacing must be positive, got {grid_dt}")
    ratio = config.tau2 / grid_dt
    k = int(round(ratio))
    if k < 1 or abs(ratio - k) > 1e-9 * ratio:
        raise FilterError(f"Grid spacing {grid_dt} does not divide tau2 = {config.tau2}")
    return k


def comb_coefficients(config: FilterConfig, samples_per_tau2: int) -> Tuple[np.ndarray, np.ndarray]:
    """Numerator and denominator of the cascade in the sample domain"""
    short = samples_per_tau2
    long = config.tau_ratio * samples_per_tau2
    b = np.zeros(long + short + 1)
    a = np.zeros(long + short + 1)
    b[0] = 1.0
    b[long] -= 1.0
    b[short] -= config.rho2
    b[long + short] += config.rho2
    a[0] = 1.0
    a[long] -= config.rho1
    a[short] -= 1.0
    a[long + short] += config.rho1
    return b, a


def staircase_input(times: Sequence[float], polarities: Sequence[int], contrast: float,
                    grid_dt: float, length: int) -> np.ndarray:
    """Integrated event staircase sampled on the grid (events snapped to nearest point)"""
    x = np.zeros(length)
    if len(times):
        index = np.rint(np.asarray(times, dtype=float) / grid_dt).astype(np.int64)
        steps = np.asarray(polarities, dtype=float) * contrast
        keep = index < length
        np.add.at(x, index[keep], steps[keep])
    return np.cumsum(x)


def dense_oracle(times: Sequence[float], polarities: Sequence[int], config: FilterConfig,
                 grid_dt: float, t_end: float) -> np.ndarray:
    """
    Output staircase y on the grid 0, grid_dt, ..., t_end for one pixel.

    Args:
        times: Event timestamps of the pixel
        polarities: Matching polarities (+1 / -1)
        config: Comb cascade parameters
        grid_dt: Grid spacing; tau2 / grid_dt must be an integer
        t_end: Last grid time

    Returns:
        Array of round(t_end / grid_dt) + 1 samples
    """
    if len(times) != len(polarities):
        raise FilterError("times and polarities differ in length")
    k = grid_ratio(config, grid_dt)
    length = int(round(t_end / grid_dt)) + 1
    x = staircase_input(times, polarities, config.contrast, grid_dt, length)
    b, a = comb_coefficients(config, k)
    logger.debug(f"Dense oracle: {length} samples, {k} per tau2")
    return lfilter(b, a, x)
