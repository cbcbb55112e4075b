from timbrebench.effects.eq import apply_eq
from timbrebench.effects.params import EffectLevel, EqBand, EqSettings, ReverbSettings
from timbrebench.effects.render import fx
from timbrebench.effects.reverb import apply_reverb

__all__ = [
    "EffectLevel",
    "EqBand",
    "EqSettings",
    "ReverbSettings",
    "apply_eq",
    "apply_reverb",
    "fx",
]
