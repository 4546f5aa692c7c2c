"""
Analytic Frequency Responses

Closed-form responses of the feed-forward comb, the feed-forward/feedback
comb and the proposed cascade, plus log-spaced Bode tables.
"""

import math
import logging
from dataclasses import dataclass, asdict
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from comb import FilterConfig

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]

# Series expansion replaces 0/0 inside this radius of omega * tau2 = 2 pi k
SINGULARITY_RADIUS = 1e-6
MAG_FLOOR = 1e-15
VARIANTS = ("proposed", "feedforward", "feedback")


class SpectralError(Exception):
    """Base exception for spectral analysis errors"""
    pass


def _wrap_phase(phase):
    """Map angles into (-pi, pi]"""
    return np.where(phase <= -math.pi, phase + 2 * math.pi, phase)


@dataclass(frozen=True)
class ComplexFrequencyResponse:
    """Magnitude and phase of a response at one frequency"""
    frequency: float
    magnitude: float
    phase: float

    @classmethod
    def from_complex(cls, frequency: float, value: complex) -> 'ComplexFrequencyResponse':
        phase = float(_wrap_phase(np.angle(value)))
        return cls(float(frequency), float(abs(value)), phase)

    @property
    def mag_db(self) -> float:
        return 20.0 * math.log10(max(self.magnitude, MAG_FLOOR))

    @property
    def phase_deg(self) -> float:
        return math.degrees(self.phase)

    @property
    def value(self) -> complex:
        return self.magnitude * complex(math.cos(self.phase), math.sin(self.phase))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _unwrap_scalar(value: np.ndarray, omega: ArrayLike):
    if np.ndim(omega) == 0:
        return complex(value)
    return value


def h_feedforward(omega: ArrayLike, tau: float):
    """H(jw) = 1 - exp(-j w tau)"""
    w = np.asarray(omega, dtype=float)
    return _unwrap_scalar(1.0 - np.exp(-1j * w * tau), omega)


def h_feedback(omega: ArrayLike, tau: float, rho: float):
    """H(jw) = (1 - exp(-j w tau)) / (1 - rho exp(-j w tau)), 0 < rho < 1"""
    if not 0 < rho < 1:
        raise SpectralError(f"Feedback gain must lie in (0, 1), got {rho}")
    w = np.asarray(omega, dtype=float)
    delay = np.exp(-1j * w * tau)
    return _unwrap_scalar((1.0 - delay) / (1.0 - rho * delay), omega)


def h_cascade(omega: ArrayLike, tau1: float, tau2: float, rho1: float, rho2: float):
    """
    Response of the cascade
        [(1 - e^{-jw tau1}) / (1 - rho1 e^{-jw tau1})] * [(1 - rho2 e^{-jw tau2}) / (1 - e^{-jw tau2})]

    When tau1 / tau2 is an integer the zeros of the short-delay denominator
    are cancelled by zeros of the long comb; there the first-order series
    limit is returned.
    """
    w = np.asarray(omega, dtype=float)
    long_delay = np.exp(-1j * w * tau1)
    short_delay = np.exp(-1j * w * tau2)
    regular = (1.0 - rho2 * short_delay) / (1.0 - rho1 * long_delay)

    ratio = tau1 / tau2
    if abs(ratio - round(ratio)) > 1e-9 * ratio:
        with np.errstate(divide="ignore", invalid="ignore"):
            value = (1.0 - long_delay) / (1.0 - short_delay) * regular
        return _unwrap_scalar(value, omega)

    k = np.round(w * tau2 / (2 * math.pi))
    delta = w - 2 * math.pi * k / tau2
    near = np.abs(w * tau2 - 2 * math.pi * k) < SINGULARITY_RADIUS
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (1.0 - long_delay) / (1.0 - short_delay)
    limit = ratio * (1.0 - 0.5j * delta * (tau1 - tau2))
    value = np.where(near, limit, direct) * regular
    return _unwrap_scalar(value, omega)


def h_proposed(omega: ArrayLike, config: FilterConfig):
    """Cascade response for a filter configuration"""
    return h_cascade(omega, config.tau1, config.tau2, config.rho1, config.rho2)


def log_frequencies(f_min: float, f_max: float, points_per_decade: int) -> np.ndarray:
    """Log-spaced grid with both endpoints included exactly"""
    if not (0 < f_min < f_max) or not math.isfinite(f_max):
        raise SpectralError(f"Frequency range must satisfy 0 < f_min < f_max, got {f_min}, {f_max}")
    if points_per_decade < 1:
        raise SpectralError(f"points_per_decade must be >= 1, got {points_per_decade}")
    count = max(2, int(math.ceil(math.log10(f_max / f_min) * points_per_decade)) + 1)
    frequencies = np.logspace(math.log10(f_min), math.log10(f_max), count)
    frequencies[0] = f_min
    frequencies[-1] = f_max
    return frequencies


def bode_table(config: FilterConfig, f_min: float, f_max: float, points_per_decade: int,
               variant: str = "proposed", tau: Optional[float] = None,
               rho: Optional[float] = None) -> List[ComplexFrequencyResponse]:
    """
    Tabulate a response over a log-spaced frequency grid.

    Args:
        config: Filter configuration (cascade parameters, defaults for single combs)
        f_min: First frequency in Hz
        f_max: Last frequency in Hz
        points_per_decade: Grid density
        variant: 'proposed', 'feedforward' or 'feedback'
        tau: Single-comb delay (default config.tau1)
        rho: Feedback-comb gain (default config.rho1)

    Returns:
        One ComplexFrequencyResponse per grid frequency
    """
    frequencies = log_frequencies(f_min, f_max, points_per_decade)
    omega = 2 * math.pi * frequencies
    delay = config.tau1 if tau is None else tau
    if variant == "proposed":
        values = h_proposed(omega, config)
    elif variant == "feedforward":
        values = h_feedforward(omega, delay)
    elif variant == "feedback":
        values = h_feedback(omega, delay, config.rho1 if rho is None else rho)
    else:
        raise SpectralError(f"Unknown variant '{variant}', expected one of {', '.join(VARIANTS)}")
    logger.debug(f"Bode table ({variant}): {len(frequencies)} points {f_min}-{f_max} Hz")
    return [ComplexFrequencyResponse.from_complex(f, v) for f, v in zip(frequencies, values)]


def bode_csv(rows: Sequence[ComplexFrequencyResponse], header: Sequence[str] = ()) -> str:
    lines = [line if line.startswith("#") else f"# {line}" for line in header]
    lines.append("freq_hz,mag_db,phase_deg")
    lines.extend(f"{row.frequency!r},{row.mag_db!r},{row.phase_deg!r}" for row in rows)
    return "".join(line + "\n" for line in lines)


@dataclass(frozen=True)
class PoleZero:
    """One s-plane singularity of the cascade (upper half plane)"""
    kind: str
    stage: str
    sigma: float
    freq_hz: float
    cancelled: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def poles_zeros(config: FilterConfig, f_max: float) -> List[PoleZero]:
    """
    Poles and zeros of the cascade with imaginary part in [0, f_max] Hz.

    The long stage has zeros at j 2 pi k / tau1 and poles at
    ln(rho1) / tau1 + j 2 pi k / tau1. The short stage has zeros at
    ln(rho2) / tau2 + j 2 pi k / tau2 and poles at j 2 pi k / tau2, each of
    which meets a long-stage zero and is marked cancelled with it.
    Conjugates are implied. Rows are sorted by frequency, zeros first.
    """
    if not (f_max >= 0 and math.isfinite(f_max)):
        raise SpectralError(f"f_max must be finite and >= 0, got {f_max}")
    long_count = int(math.floor(f_max * config.tau1 * (1 + 1e-12)))
    short_count = int(math.floor(f_max * config.tau2 * (1 + 1e-12)))
    ratio = config.tau_ratio
    long_sigma = math.log(config.rho1) / config.tau1
    short_sigma = math.log(config.rho2) / config.tau2

    rows: List[PoleZero] = []
    for k in range(long_count + 1):
        freq = k / config.tau1
        rows.append(PoleZero("zero", "long", 0.0, freq, cancelled=k % ratio == 0))
        rows.append(PoleZero("pole", "long", long_sigma, freq))
    for m in range(short_count + 1):
        freq = m / config.tau2
        rows.append(PoleZero("zero", "short", short_sigma, freq))
        rows.append(PoleZero("pole", "short", 0.0, freq, cancelled=True))
    rows.sort(key=lambda row: (row.freq_hz, row.kind != "zero", row.stage))
    logger.debug(f"Pole-zero table: {len(rows)} singularities up to {f_max} Hz")
    return rows


def poles_zeros_csv(rows: Sequence[PoleZero], header: Sequence[str] = ()) -> str:
    lines = [line if line.startswith("#") else f"# {line}" for line in header]
    lines.append("kind,stage,sigma,freq_hz,cancelled")
    lines.extend(f"{row.kind},{row.stage},{row.sigma!r},{row.freq_hz!r},{int(row.cancelled)}" for row in rows)
    return "".join(line + "\n" for line in lines)
