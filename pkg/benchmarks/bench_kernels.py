"""Compare the compiled DSP kernels against the pure numpy/scipy fallback.

Usage: python3 benchmarks/bench_kernels.py [--seconds 2.0] [--rate 44100]
"""

import argparse
import time

import numpy as np

from timbrebench.effects import _fallback, kernels


def time_call(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--seconds", type=float, default=2.0)
    parser.add_argument("--rate", type=int, default=44100)
    args = parser.parse_args()

    if not kernels.USING_COMPILED:
        print("compiled kernels unavailable; nothing to compare")
        return

    rng = np.random.default_rng(0)
    x = rng.normal(scale=0.1, size=int(args.seconds * args.rate))
    print(f"signal: {x.size} samples ({args.seconds:g} s @ {args.rate} Hz)\n")

    sos = np.tile([1.01, -1.8, 0.82, 1.0, -1.8, 0.81], (40, 1))
    t_c = time_call(kernels.biquad_cascade, x, sos)
    t_f = time_call(_fallback.biquad_cascade, x, sos)
    print(f"biquad cascade (40 sections):  compiled {t_c*1e3:8.1f} ms   "
          f"fallback {t_f*1e3:8.1f} ms   speedup {t_f/t_c:5.1f}x")

    delays = np.array([1103, 1229, 1361, 1481, 1609, 1733, 1861, 1987], dtype=np.int64)
    gains = np.full(8, 0.85)
    lp = np.full(8, 0.2)
    phases = np.arange(8) * np.pi / 4

    t_c = time_call(kernels.comb_bank, x, delays, gains, lp, 0.0, 0.0, phases)
    t_f = time_call(_fallback.comb_bank, x, delays, gains, lp, 0.0, 0.0, phases)
    print(f"comb bank (8 combs, static):   compiled {t_c*1e3:8.1f} ms   "
          f"fallback {t_f*1e3:8.1f} ms   speedup {t_f/t_c:5.1f}x")

    t_c = time_call(kernels.comb_bank, x, delays, gains, lp, 8.0, 0.001, phases, repeats=1)
    t_f = time_call(_fallback.comb_bank, x, delays, gains, lp, 8.0, 0.001, phases, repeats=1)
    print(f"comb bank (modulated):         compiled {t_c*1e3:8.1f} ms   "
          f"fallback {t_f*1e3:8.1f} ms   speedup {t_f/t_c:5.1f}x")

    ap = np.array([53, 127, 211, 331], dtype=np.int64)
    t_c = time_call(kernels.allpass_chain, x, ap, 0.5)
    t_f = time_call(_fallback.allpass_chain, x, ap, 0.5)
    print(f"all-pass chain (4 stages):     compiled {t_c*1e3:8.1f} ms   "
          f"fallback {t_f*1e3:8.1f} ms   speedup {t_f/t_c:5.1f}x")


if __name__ == "__main__":
    main()
