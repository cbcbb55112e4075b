"""Reverberator: parallel low-pass-damped feedback combs into series all-passes.

Eight parallel combs (mutually co-prime base delays spanning 25-45 ms) feed
four series all-pass diffusers (gain 0.5, 1-7 ms). Each comb's feedback gain
is min(feedback_gain, 10^(-3*tau/decay_s)), so an isolated comb decays exactly
60 dB at decay_s and stability is guaranteed for feedback_gain < 1.
"""

from __future__ import annotations

import math

import numpy as np

from timbrebench.audio import AudioBuffer
from timbrebench.effects import kernels
from timbrebench.effects.params import EffectLevel, ReverbSettings
from timbrebench.errors import FilterInstabilityError

COMB_DELAYS_MS = (25.0, 27.9, 30.7, 33.6, 36.4, 39.3, 42.1, 45.0)
ALLPASS_DELAYS_MS = (1.1, 2.6, 4.3, 6.8)
ALLPASS_GAIN = 0.5
MAX_TAIL_S = 10.0


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for p in range(3, int(math.isqrt(n)) + 1, 2):
        if n % p == 0:
            return False
    return True


def _nearest_prime(n: int) -> int:
    for offset in range(n):
        if _is_prime(n - offset):
            return n - offset
        if _is_prime(n + offset):
            return n + offset
    return 2


def comb_delays_samples(sample_rate: int) -> np.ndarray:
    """Base comb delays in samples, nudged to primes so they are co-prime."""
    return np.array(
        [_nearest_prime(max(2, round(ms * sample_rate / 1000.0))) for ms in COMB_DELAYS_MS],
        dtype=np.int64,
    )


def allpass_delays_samples(sample_rate: int) -> np.ndarray:
    return np.array(
        [max(1, round(ms * sample_rate / 1000.0)) for ms in ALLPASS_DELAYS_MS],
        dtype=np.int64,
    )


def comb_gains(settings: ReverbSettings, delays: np.ndarray, sample_rate: int) -> np.ndarray:
    taus = delays / sample_rate
    decay_gains = 10.0 ** (-3.0 * taus / settings.decay_s)
    return np.minimum(settings.feedback_gain, decay_gains)


def tail_seconds(settings: ReverbSettings, sample_rate: int) -> float:
    """Time for the impulse response to fall 60 dB, capped at MAX_TAIL_S."""
    delays = comb_delays_samples(sample_rate)
    gains = comb_gains(settings, delays, sample_rate)
    taus = delays / sample_rate
    comb_tail = 0.0
    for tau, g in zip(taus, gains):
        if g <= 0.0:
            comb_tail = max(comb_tail, float(tau))
        else:
            comb_tail = max(comb_tail, float(-3.0 * tau / math.log10(g)))
    # All-pass stages (gain 0.5) ring for roughly 10 delay periods each.
    ap_tail = sum(10.0 * ms / 1000.0 for ms in ALLPASS_DELAYS_MS)
    return min(MAX_TAIL_S, comb_tail + ap_tail)


def apply_reverb(
    buffer: AudioBuffer, settings: ReverbSettings, level: EffectLevel
) -> AudioBuffer:
    """Mix (1-w) dry + w wet, where w = level * wet_dry; output gains a decay tail."""
    sample_rate = buffer.sample_rate
    w = level.value * settings.wet_dry
    if w == 0.0:
        return AudioBuffer(samples=buffer.samples.copy(), sample_rate=sample_rate)

    delays = comb_delays_samples(sample_rate)
    gains = comb_gains(settings, delays, sample_rate)
    if np.any(gains >= 1.0):
        raise FilterInstabilityError("unstable reverb: effective loop gain >= 1")

    nyquist = sample_rate / 2.0
    if settings.lowpass_hz >= nyquist:
        lp = 0.0  # cutoff at/above Nyquist: damping disabled
    else:
        lp = math.exp(-2.0 * math.pi * settings.lowpass_hz / sample_rate)
    lp_coefs = np.full(delays.size, lp)

    mod_depth = settings.modulation_depth_ms * sample_rate / 1000.0
    mod_rate = 2.0 * math.pi * settings.modulation_hz / sample_rate
    phases = np.arange(delays.size) * (math.pi / 4.0)

    tail = int(round(tail_seconds(settings, sample_rate) * sample_rate))
    n_out = buffer.num_samples + tail
    ap_delays = allpass_delays_samples(sample_rate)

    out = np.zeros((buffer.channels, n_out))
    for ch in range(buffer.channels):
        dry = np.zeros(n_out)
        dry[: buffer.num_samples] = buffer.samples[ch]
        wet = kernels.comb_bank(dry, delays, gains, lp_coefs, mod_depth, mod_rate, phases)
        wet = kernels.allpass_chain(wet, ap_delays, ALLPASS_GAIN)
        wet *= settings.effect_gain
        out[ch] = (1.0 - w) * dry + w * wet

    if not np.all(np.isfinite(out)):
        raise FilterInstabilityError(
            f"descriptor {settings.descriptor!r}: reverb produced non-finite samples"
        )
    return AudioBuffer(samples=out, sample_rate=sample_rate)
