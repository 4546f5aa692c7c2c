"""
Comb Filter Configuration

Parameters of the flicker-removal cascade and the integer time lattice the
per-pixel delay lines run on.
"""

import math
import logging
from dataclasses import dataclass, asdict, fields
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

RATIO_TOLERANCE = 1e-9


class FilterError(Exception):
    """Base exception for comb filter errors"""
    pass


class ConfigError(FilterError):
    """Filter parameters violate their constraints"""
    pass


class MonotonicityError(FilterError):
    """An event for a pixel arrived earlier than its last processed change"""

    def __init__(self, message: str, pixel=None, index: Optional[int] = None):
        super().__init__(message)
        self.pixel = pixel
        self.index = index


@dataclass(frozen=True)
class FilterConfig:
    """
    Resolved comb cascade parameters.

    tau1 is the long (base-period) delay, tau2 the short one; tau1 / tau2 must
    be an integer so the delay lines share one tick lattice of
    tau2 / ticks_per_tau2 seconds.
    """
    base_frequency: float
    tau1: float
    tau2: float
    rho1: float = 0.6
    rho2: float = 0.96
    contrast: float = 1.0
    sampler_threshold: float = 1.0
    prune_epsilon: float = 1e-9
    ticks_per_tau2: int = 20
    drain_periods: float = 5.0

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        finite = all(math.isfinite(float(getattr(self, f.name))) for f in fields(self))
        if not finite:
            raise ConfigError("Filter parameters must be finite")
        if self.base_frequency <= 0:
            raise ConfigError(f"Base frequency must be positive, got {self.base_frequency}")
        if not 0 < self.rho1 < 1:
            raise ConfigError(f"rho1 must lie in (0, 1), got {self.rho1}")
        if not 0 < self.rho2 < 1:
            raise ConfigError(f"rho2 must lie in (0, 1), got {self.rho2}")
        if self.tau2 <= 0 or self.tau1 <= self.tau2:
            raise ConfigError(f"Delays must satisfy 0 < tau2 < tau1, got tau1={self.tau1} tau2={self.tau2}")
        ratio = self.tau1 / self.tau2
        if abs(ratio - round(ratio)) > RATIO_TOLERANCE * ratio:
            raise ConfigError(f"tau1 / tau2 must be an integer, got {ratio}")
        if self.contrast <= 0:
            raise ConfigError(f"Contrast must be positive, got {self.contrast}")
        if self.sampler_threshold <= 0:
            raise ConfigError(f"Sampler threshold must be positive, got {self.sampler_threshold}")
        if self.prune_epsilon < 0:
            raise ConfigError(f"prune_epsilon must be >= 0, got {self.prune_epsilon}")
        if int(self.ticks_per_tau2) != self.ticks_per_tau2 or self.ticks_per_tau2 < 1:
            raise ConfigError(f"ticks_per_tau2 must be a positive integer, got {self.ticks_per_tau2}")
        if self.drain_periods < 0:
            raise ConfigError(f"drain_periods must be >= 0, got {self.drain_periods}")

    @classmethod
    def from_base_frequency(cls, base_frequency: float = 50.0, rho1: float = 0.6,
                            rho2: Optional[float] = None, tau_ratio: int = 10,
                            contrast: float = 1.0, sampler_threshold: Optional[float] = None,
                            prune_epsilon: float = 1e-9, ticks_per_tau2: int = 20,
                            drain_periods: float = 5.0) -> 'FilterConfig':
        """
        Build a configuration tuned for unit DC gain.

        Args:
            base_frequency: Flicker base frequency f0 in Hz; tau1 = 1 / f0
            rho1: Feedback gain of the long comb
            rho2: Short comb gain; derived from the tuning condition when omitted
            tau_ratio: Integer tau1 / tau2
            contrast: Log-intensity step represented by one event
            sampler_threshold: Output event threshold, defaults to contrast

        Returns:
            Validated FilterConfig
        """
        if base_frequency <= 0:
            raise ConfigError(f"Base frequency must be positive, got {base_frequency}")
        if int(tau_ratio) != tau_ratio or tau_ratio < 2:
            raise ConfigError(f"tau ratio must be an integer >= 2, got {tau_ratio}")
        tau1 = 1.0 / base_frequency
        tau2 = tau1 / tau_ratio
        if rho2 is None:
            rho2 = 1.0 - (1.0 - rho1) / tau_ratio
        config = cls(
            base_frequency=base_frequency,
            tau1=tau1,
            tau2=tau2,
            rho1=rho1,
            rho2=rho2,
            contrast=contrast,
            sampler_threshold=contrast if sampler_threshold is None else sampler_threshold,
            prune_epsilon=prune_epsilon,
            ticks_per_tau2=int(ticks_per_tau2),
            drain_periods=drain_periods,
        )
        if abs(config.tuning_residual) > 1e-12:
            logger.warning(f"Tuning condition not met (residual {config.tuning_residual:.3e}), "
                           f"DC gain will differ from 1")
        return config

    @property
    def tau_ratio(self) -> int:
        return int(round(self.tau1 / self.tau2))

    @property
    def tick(self) -> float:
        """Lattice spacing in seconds"""
        return self.tau2 / self.ticks_per_tau2

    @property
    def lag_short(self) -> int:
        return int(self.ticks_per_tau2)

    @property
    def lag_long(self) -> int:
        return self.tau_ratio * int(self.ticks_per_tau2)

    @property
    def lag_sum(self) -> int:
        return self.lag_short + self.lag_long

    @property
    def drain_horizon(self) -> float:
        return self.drain_periods * self.tau1

    @property
    def tuning_residual(self) -> float:
        """tau2 (1 - rho1) - tau1 (1 - rho2); zero for unit DC gain"""
        return self.tau2 * (1.0 - self.rho1) - self.tau1 * (1.0 - self.rho2)

    @property
    def dc_gain(self) -> float:
        return self.tau_ratio * (1.0 - self.rho2) / (1.0 - self.rho1)

    def to_tick(self, t: float) -> int:
        """Nearest lattice tick of a timestamp"""
        return int(math.floor(t / self.tick + 0.5))

    def to_time(self, tick: int) -> float:
        return tick * self.tick

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'FilterConfig':
        known = {f.name for f in fields(cls)}
        return cls(**{key: value for key, value in data.items() if key in known})
