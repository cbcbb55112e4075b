"""Dispatch a single effect render: fx(audio, effect, level)."""

from __future__ import annotations

from timbrebench.audio import AudioBuffer
from timbrebench.effects.eq import apply_eq
from timbrebench.effects.params import EffectLevel, EqSettings, ReverbSettings
from timbrebench.effects.reverb import apply_reverb
from timbrebench.errors import ValidationError


def fx(
    audio: AudioBuffer, effect: EqSettings | ReverbSettings, level: EffectLevel
) -> AudioBuffer:
    """Apply an EQ or reverb setting at the given intensity. Deterministic."""
    if isinstance(effect, EqSettings):
        return apply_eq(audio, effect, level)
    if isinstance(effect, ReverbSettings):
        return apply_reverb(audio, effect, level)
    raise ValidationError(f"unknown effect type {type(effect).__name__}")
