"""
Spectral Analysis Module

Analytic comb responses and Bode tables, zero-order-hold reconstruction of
event streams, periodogram PSDs and band attenuation.
"""

from .response import (
    SpectralError, ComplexFrequencyResponse,
    h_feedforward, h_feedback, h_cascade, h_proposed,
    log_frequencies, bode_table, bode_csv, VARIANTS,
    PoleZero, poles_zeros, poles_zeros_csv,
)
from .psd import (
    SpectrumData, AttenuationSample,
    reconstruct_zoh, naive_dft, psd, window_psd, next_power_of_two,
    attenuation_at, attenuation_profile, consecutive_windows,
)

__all__ = [
    "SpectralError",
    "ComplexFrequencyResponse",
    "h_feedforward",
    "h_feedback",
    "h_cascade",
    "h_proposed",
    "log_frequencies",
    "bode_table",
    "bode_csv",
    "VARIANTS",
    "PoleZero",
    "poles_zeros",
    "poles_zeros_csv",
    "SpectrumData",
    "AttenuationSample",
    "reconstruct_zoh",
    "naive_dft",
    "psd",
    "window_psd",
    "next_power_of_two",
    "attenuation_at",
    "attenuation_profile",
    "consecutive_windows",
]
