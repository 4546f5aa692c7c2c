"""
Zero-Order-Hold Reconstruction and Power Spectral Density

Turns an event stream into a uniformly sampled region-mean staircase and
estimates its one-sided PSD with a Hann-tapered periodogram.
"""

import math
import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Sequence, Tuple, Union

import numpy as np
from scipy.signal import get_window

from events import Event, Rect

from .response import SpectralError

logger = logging.getLogger(__name__)

MIN_SAMPLES = 16
TAPER = "hann"

Region = Union[Rect, Tuple[int, int]]


@dataclass
class SpectrumData:
    """One-sided PSD with the metadata of the analysed window"""
    frequencies: np.ndarray
    power: np.ndarray
    start_time: float
    duration: float
    sample_rate: float
    taper: str = TAPER
    nfft: int = 0

    @property
    def resolution(self) -> float:
        return self.sample_rate / self.nfft if self.nfft else 0.0

    def band_power(self, low: float, high: float) -> float:
        mask = (self.frequencies >= low) & (self.frequencies <= high)
        if not mask.any():
            raise SpectralError(f"No frequency bins in band [{low}, {high}] Hz")
        return float(self.power[mask].sum())

    def peak_frequency(self, exclude_dc: bool = True) -> float:
        power = self.power[1:] if exclude_dc else self.power
        offset = 1 if exclude_dc else 0
        return float(self.frequencies[int(np.argmax(power)) + offset])

    def to_csv(self, header: Sequence[str] = ()) -> str:
        lines = [line if line.startswith("#") else f"# {line}" for line in header]
        lines.append("freq_hz,power")
        lines.extend(f"{float(f)!r},{float(p)!r}" for f, p in zip(self.frequencies, self.power))
        return "".join(line + "\n" for line in lines)


class AttenuationSample(NamedTuple):
    t_start: float
    t_end: float
    attenuation_db: float


def _as_rect(region: Region) -> Rect:
    if isinstance(region, Rect):
        return region
    x, y = region
    return Rect(x, y, 1, 1)


def reconstruct_zoh(events: Sequence[Event], region: Region, sample_rate: float,
                    t_start: float, t_end: float, contrast: float = 1.0) -> np.ndarray:
    """
    Region-mean staircase sum(polarity * contrast) sampled at t_start + n / sample_rate.

    Args:
        events: Time-sorted events (events before t_start set the initial level)
        region: Rect or single (x, y) pixel
        sample_rate: Grid rate in Hz
        t_start: First grid time
        t_end: End of the grid (exclusive)
        contrast: Log-intensity step per event

    Returns:
        Array of round((t_end - t_start) * sample_rate) samples
    """
    rect = _as_rect(region)
    if rect.area == 0:
        raise SpectralError("Reconstruction region is empty")
    if sample_rate <= 0:
        raise SpectralError(f"Sample rate must be positive, got {sample_rate}")
    if t_end < t_start:
        raise SpectralError(f"Window end {t_end} precedes start {t_start}")

    count = int(round((t_end - t_start) * sample_rate))
    grid = t_start + np.arange(count) / sample_rate
    selected = [(event.t, event.polarity) for event in events if rect.contains(event.x, event.y)]
    if not selected:
        return np.zeros(count)

    data = np.asarray(selected, dtype=float)
    times = data[:, 0]
    order = np.argsort(times, kind="stable")
    times = times[order]
    level = np.cumsum(data[order, 1]) * contrast
    index = np.searchsorted(times, grid, side="right")
    signal = np.where(index > 0, level[np.maximum(index - 1, 0)], 0.0)
    return signal / rect.area


def next_power_of_two(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def naive_dft(signal: Sequence[float], nfft: int = 0) -> np.ndarray:
    """O(n^2) discrete Fourier transform, the reference for the FFT path"""
    x = np.asarray(signal, dtype=float)
    n = nfft or len(x)
    padded = np.zeros(n)
    padded[:len(x)] = x
    k = np.arange(n)
    kernel = np.exp(-2j * math.pi * np.outer(k, k) / n)
    return kernel @ padded


def psd(signal: Sequence[float], sample_rate: float, start_time: float = 0.0) -> SpectrumData:
    """
    One-sided periodogram: mean removed, Hann taper, zero padded to a power of two.

    Scaled so that sum(power) * resolution equals sum((w x)^2) / sum(w^2).
    """
    x = np.asarray(signal, dtype=float)
    if x.size < MIN_SAMPLES:
        raise SpectralError(f"Signal too short for a PSD: {x.size} < {MIN_SAMPLES} samples")
    if sample_rate <= 0:
        raise SpectralError(f"Sample rate must be positive, got {sample_rate}")

    window = get_window(TAPER, x.size)
    tapered = (x - x.mean()) * window
    nfft = next_power_of_two(x.size)
    spectrum = np.fft.rfft(tapered, n=nfft)
    power = np.abs(spectrum) ** 2 / (sample_rate * np.sum(window ** 2))
    if nfft % 2 == 0:
        power[1:-1] *= 2.0
    else:
        power[1:] *= 2.0
    frequencies = np.fft.rfftfreq(nfft, d=1.0 / sample_rate)
    return SpectrumData(
        frequencies=frequencies,
        power=power,
        start_time=start_time,
        duration=x.size / sample_rate,
        sample_rate=sample_rate,
        taper=TAPER,
        nfft=nfft,
    )


def window_psd(events: Sequence[Event], region: Region, sample_rate: float,
               t_start: float, t_end: float, contrast: float = 1.0) -> SpectrumData:
    signal = reconstruct_zoh(events, region, sample_rate, t_start, t_end, contrast)
    return psd(signal, sample_rate, start_time=t_start)


def attenuation_at(raw: SpectrumData, filtered: SpectrumData, frequency: float,
                   bandwidth: float) -> float:
    """10 log10 of raw over filtered power in [f - bw/2, f + bw/2]; positive means attenuation"""
    if raw.power.shape != filtered.power.shape or not np.allclose(raw.frequencies, filtered.frequencies):
        raise SpectralError("Spectra do not share a frequency grid")
    low = frequency - bandwidth / 2.0
    high = frequency + bandwidth / 2.0
    raw_power = raw.band_power(low, high)
    filtered_power = filtered.band_power(low, high)
    if filtered_power == 0:
        return math.inf if raw_power > 0 else 0.0
    if raw_power == 0:
        return -math.inf
    return 10.0 * math.log10(raw_power / filtered_power)


def attenuation_profile(raw_events: Sequence[Event], filtered_events: Sequence[Event],
                        region: Region, windows: Sequence[Tuple[float, float]],
                        frequency: float, bandwidth: float, sample_rate: float = 1000.0,
                        contrast: float = 1.0) -> List[AttenuationSample]:
    """Attenuation at one frequency over successive windows (convergence view)"""
    profile: List[AttenuationSample] = []
    for t_start, t_end in windows:
        raw = window_psd(raw_events, region, sample_rate, t_start, t_end, contrast)
        filtered = window_psd(filtered_events, region, sample_rate, t_start, t_end, contrast)
        value = attenuation_at(raw, filtered, frequency, bandwidth)
        logger.debug(f"Attenuation {frequency} Hz over [{t_start}, {t_end}): {value:.2f} dB")
        profile.append(AttenuationSample(t_start, t_end, value))
    return profile


def consecutive_windows(t_start: float, length: float, count: int,
                        step: float = 0.0) -> List[Tuple[float, float]]:
    """count windows of the given length, each starting step (default length) after the last"""
    if length <= 0 or count < 1:
        raise SpectralError(f"Need a positive window length and count, got {length}, {count}")
    stride = step or length
    return [(t_start + i * stride, t_start + i * stride + length) for i in range(count)]
