"""Pure numpy/scipy realizations of the DSP hot loops.

Same contracts as the compiled module in _kernels.pyx; selected at import by
timbrebench.effects.kernels when the extension is unavailable (or forced off
via TIMBREBENCH_PURE_PYTHON=1).
"""

from __future__ import annotations

import math

import numpy as np
from scipy import signal


def biquad_cascade(x: np.ndarray, sos: np.ndarray) -> np.ndarray:
    """Run x through a cascade of second-order sections (rows b0,b1,b2,a0,a1,a2)."""
    x = np.asarray(x, dtype=np.float64)
    sos = np.asarray(sos, dtype=np.float64)
    if sos.shape[0] == 0:
        return x.copy()
    return signal.sosfilt(sos / sos[:, 3:4], x)


def comb_bank(
    x: np.ndarray,
    delays: np.ndarray,
    gains: np.ndarray,
    lp_coefs: np.ndarray,
    mod_depth: float,
    mod_rate: float,
    phases: np.ndarray,
) -> np.ndarray:
    """Sum of parallel feedback combs, each with a one-pole low-pass in the loop.

    delays are integer base delays in samples; mod_depth (samples) and mod_rate
    (radians/sample) sinusoidally modulate the read position per comb.
    """
    x = np.asarray(x, dtype=np.float64)
    delays = np.asarray(delays, dtype=np.int64)
    gains = np.asarray(gains, dtype=np.float64)
    lp_coefs = np.asarray(lp_coefs, dtype=np.float64)
    phases = np.asarray(phases, dtype=np.float64)

    if mod_depth == 0.0 or mod_rate == 0.0:
        # Static delays: each comb is a rational filter, so lfilter applies.
        #   y(1 - c z^-1 - g(1-c) z^-D) = x z^-D (1 - c z^-1)
        out = np.zeros_like(x)
        for d, g, c in zip(delays, gains, lp_coefs):
            b = np.zeros(d + 2)
            b[d] = 1.0
            b[d + 1] = -c
            a = np.zeros(d + 1)
            a[0] = 1.0
            a[1] += -c
            a[d] += -g * (1.0 - c)
            out += signal.lfilter(b, a, x)
        return out

    return _comb_bank_modulated(x, delays, gains, lp_coefs, mod_depth, mod_rate, phases)


def _comb_bank_modulated(x, delays, gains, lp_coefs, mod_depth, mod_rate, phases):
    n = x.size
    n_combs = delays.size
    out = np.zeros(n)
    max_delay = int(delays.max()) + int(math.ceil(mod_depth)) + 2
    bufs = np.zeros((n_combs, max_delay))
    lp_states = np.zeros(n_combs)
    write = 0
    for i in range(n):
        taps = delays + mod_depth * np.sin(mod_rate * i + phases)
        read = (write - taps) % max_delay
        lo = np.floor(read).astype(np.int64)
        frac = read - lo
        hi = (lo + 1) % max_delay
        y = bufs[np.arange(n_combs), lo] * (1.0 - frac) + bufs[np.arange(n_combs), hi] * frac
        lp_states = y * (1.0 - lp_coefs) + lp_states * lp_coefs
        bufs[:, write] = x[i] + gains * lp_states
        out[i] = y.sum()
        write = (write + 1) % max_delay
    return out


def allpass_chain(x: np.ndarray, delays: np.ndarray, gain: float) -> np.ndarray:
    """Series Schroeder all-pass stages: y = -g x + x[n-D] + g y[n-D]."""
    y = np.asarray(x, dtype=np.float64)
    for d in np.asarray(delays, dtype=np.int64):
        b = np.zeros(d + 1)
        b[0] = -gain
        b[d] = 1.0
        a = np.zeros(d + 1)
        a[0] = 1.0
        a[d] = -gain
        y = signal.lfilter(b, a, y)
    return y
