"""Selects the compiled DSP kernels when available, else the numpy fallback.

Set TIMBREBENCH_PURE_PYTHON=1 to force the fallback (used by the benchmark
and to debug kernel discrepancies).
"""

from __future__ import annotations

import os

if os.environ.get("TIMBREBENCH_PURE_PYTHON") == "1":
    _impl = None
else:
    try:
        from timbrebench.effects import _kernels as _impl
    except ImportError:
        _impl = None

if _impl is not None:
    USING_COMPILED = True
    biquad_cascade = _impl.biquad_cascade
    comb_bank = _impl.comb_bank
    allpass_chain = _impl.allpass_chain
else:
    from timbrebench.effects import _fallback

    USING_COMPILED = False
    biquad_cascade = _fallback.biquad_cascade
    comb_bank = _fallback.comb_bank
    allpass_chain = _fallback.allpass_chain

__all__ = ["USING_COMPILED", "allpass_chain", "biquad_cascade", "comb_bank"]
