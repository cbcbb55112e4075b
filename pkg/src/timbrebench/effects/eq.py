"""40-band parametric equalizer: a cascade of second-order peaking sections."""

from __future__ import annotations

import math
import warnings

import numpy as np

from timbrebench.audio import AudioBuffer
from timbrebench.effects import kernels
from timbrebench.effects.params import EffectLevel, EqSettings
from timbrebench.errors import FilterInstabilityError


def peaking_coefficients(
    center_hz: float, bandwidth_hz: float, gain_db: float, sample_rate: int
) -> tuple[float, float, float, float, float, float]:
    """RBJ peaking-EQ biquad (b0, b1, b2, a0, a1, a2), Q = center / bandwidth.

    Gain at the center frequency is exactly gain_db.
    """
    a = 10.0 ** (gain_db / 40.0)
    w0 = 2.0 * math.pi * center_hz / sample_rate
    q = center_hz / bandwidth_hz
    alpha = math.sin(w0) / (2.0 * q)
    cos_w0 = math.cos(w0)
    b0 = 1.0 + alpha * a
    b1 = -2.0 * cos_w0
    b2 = 1.0 - alpha * a
    a0 = 1.0 + alpha / a
    a1 = -2.0 * cos_w0
    a2 = 1.0 - alpha / a
    return (b0, b1, b2, a0, a1, a2)


def peaking_magnitude_db(
    center_hz: float, bandwidth_hz: float, gain_db: float, sample_rate: int, at_hz: float
) -> float:
    """Analytic magnitude response of one peaking section, in dB."""
    b0, b1, b2, a0, a1, a2 = peaking_coefficients(center_hz, bandwidth_hz, gain_db, sample_rate)
    z = np.exp(-1j * 2.0 * math.pi * at_hz / sample_rate)
    num = b0 + b1 * z + b2 * z * z
    den = a0 + a1 * z + a2 * z * z
    return 20.0 * math.log10(abs(num / den))


def eq_sos(settings: EqSettings, level: EffectLevel, sample_rate: int) -> np.ndarray:
    """Second-order sections for the cascade, gains scaled by the level in dB.

    Zero-gain bands are identity and dropped; bands at or above Nyquist are
    skipped with a warning.
    """
    nyquist = sample_rate / 2.0
    sections = []
    for band in settings.bands:
        if band.center_hz >= nyquist:
            warnings.warn(
                f"descriptor {settings.descriptor!r}: band at {band.center_hz} Hz is at or "
                f"above Nyquist ({nyquist} Hz) and was skipped",
                stacklevel=2,
            )
            continue
        scaled_db = level.value * band.gain_db
        if scaled_db == 0.0:
            continue
        sections.append(
            peaking_coefficients(band.center_hz, band.bandwidth_hz, scaled_db, sample_rate)
        )
    if not sections:
        return np.zeros((0, 6))
    return np.asarray(sections, dtype=np.float64)


def apply_eq(buffer: AudioBuffer, settings: EqSettings, level: EffectLevel) -> AudioBuffer:
    """Filter every channel through the scaled peaking cascade."""
    sos = eq_sos(settings, level, buffer.sample_rate)
    out = np.empty_like(buffer.samples)
    for ch in range(buffer.channels):
        out[ch] = kernels.biquad_cascade(buffer.samples[ch], sos)
    if not np.all(np.isfinite(out)):
        raise FilterInstabilityError(
            f"descriptor {settings.descriptor!r}: filter instability (non-finite samples)"
        )
    return AudioBuffer(samples=out, sample_rate=buffer.sample_rate)
