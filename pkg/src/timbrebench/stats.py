"""Correlation and trend-classification primitives shared by both experiments."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from timbrebench.errors import ValidationError

DEFAULT_TREND_TOLERANCE = 1e-4


class TrendClass(enum.Enum):
    MONOTONIC_UP = "monotonic_up"
    MONOTONIC_DOWN = "monotonic_down"
    PEAKED = "peaked"
    DIPPED = "dipped"
    FLAT = "flat"

    @property
    def symbol(self) -> str:
        """Table rendering: only monotone trends get arrows, the rest fold to '-'."""
        if self is TrendClass.MONOTONIC_UP:
            return "↑"
        if self is TrendClass.MONOTONIC_DOWN:
            return "↓"
        return "-"


TREND_LEGEND = "↑ = Monotonic up, ↓ = Monotonic down, - = flat or inconsistent"


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson product-moment correlation, computed in double precision."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
        raise ValidationError(f"length mismatch: {x.shape} vs {y.shape}")
    n = x.size
    if n < 3:
        raise ValidationError(f"need at least 3 points, got {n}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValidationError("non-finite input")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = math.sqrt(float(dx @ dx))
    sy = math.sqrt(float(dy @ dy))
    if sx == 0.0 or sy == 0.0:
        raise ValidationError("correlation undefined: zero variance")
    r = float(dx @ dy) / (sx * sy)
    return max(-1.0, min(1.0, r))


def classify_trend(
    deltas: Sequence[float], tolerance: float = DEFAULT_TREND_TOLERANCE
) -> TrendClass:
    """Classify a (low, mid, high) delta triple.

    Monotone classes take precedence over peaked/dipped when both hold within
    the tolerance slack; anything else is flat.
    """
    if len(deltas) != 3:
        raise ValidationError(f"expected 3 deltas, got {len(deltas)}")
    low, mid, high = (float(d) for d in deltas)
    if not all(math.isfinite(v) for v in (low, mid, high)):
        raise ValidationError("non-finite delta")
    if tolerance < 0:
        raise ValidationError(f"tolerance must be >= 0, got {tolerance}")
    eps = tolerance

    if mid >= low - eps and high >= mid - eps and high - low > eps:
        return TrendClass.MONOTONIC_UP
    if mid <= low + eps and high <= mid + eps and low - high > eps:
        return TrendClass.MONOTONIC_DOWN
    if mid > max(low, high) + eps:
        return TrendClass.PEAKED
    if mid < min(low, high) - eps:
        return TrendClass.DIPPED
    return TrendClass.FLAT


@dataclass(frozen=True)
class CorrelationSummary:
    positive_count: int
    negative_count: int
    mean_r: float | None
    total: int
    undefined_count: int


def summarize_correlations(
    rs: Iterable[tuple[str, float | None]],
) -> CorrelationSummary:
    """Count positive/negative correlations and average the defined ones.

    Entries with r=None (undefined, e.g. zero variance) are excluded from the
    counts and the mean but tallied separately.
    """
    defined: list[float] = []
    undefined = 0
    for _, r in rs:
        if r is None:
            undefined += 1
        else:
            defined.append(float(r))
    positive = sum(1 for r in defined if r > 0)
    negative = sum(1 for r in defined if r < 0)
    mean_r = float(np.mean(defined)) if defined else None
    return CorrelationSummary(
        positive_count=positive,
        negative_count=negative,
        mean_r=mean_r,
        total=len(defined) + undefined,
        undefined_count=undefined,
    )
