"""Effect parameter types mirroring SocialFX-style descriptor settings."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from timbrebench.errors import ValidationError

EQ_BAND_COUNT = 40
DEFAULT_LEVELS = (0.3, 0.6, 1.0)


@dataclass(frozen=True)
class EqBand:
    center_hz: float
    bandwidth_hz: float
    gain_db: float

    def __post_init__(self):
        if self.center_hz <= 0:
            raise ValidationError(f"center_hz must be > 0, got {self.center_hz}")
        if self.bandwidth_hz <= 0:
            raise ValidationError(f"bandwidth_hz must be > 0, got {self.bandwidth_hz}")


@dataclass(frozen=True)
class EqSettings:
    descriptor: str
    bands: tuple[EqBand, ...]

    def __post_init__(self):
        bands = tuple(self.bands)
        if len(bands) != EQ_BAND_COUNT:
            raise ValidationError(
                f"descriptor {self.descriptor!r}: expected {EQ_BAND_COUNT} bands, "
                f"got {len(bands)}"
            )
        centers = [b.center_hz for b in bands]
        if any(b >= a for b, a in zip(centers, centers[1:])):
            raise ValidationError(
                f"descriptor {self.descriptor!r}: center frequencies must be "
                "strictly increasing"
            )
        object.__setattr__(self, "bands", bands)

    def to_dict(self) -> dict:
        return {
            "descriptor": self.descriptor,
            "bands": [
                {"freq_hz": b.center_hz, "bandwidth_hz": b.bandwidth_hz, "gain_db": b.gain_db}
                for b in self.bands
            ],
        }

    @classmethod
    def from_dict(cls, record: dict) -> "EqSettings":
        try:
            descriptor = record["descriptor"]
            bands = tuple(
                EqBand(float(b["freq_hz"]), float(b["bandwidth_hz"]), float(b["gain_db"]))
                for b in record["bands"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed EQ record: {exc}") from exc
        return cls(descriptor=descriptor, bands=bands)


@dataclass(frozen=True)
class ReverbSettings:
    descriptor: str
    decay_s: float
    feedback_gain: float
    modulation_hz: float
    modulation_depth_ms: float
    lowpass_hz: float
    effect_gain: float
    wet_dry: float

    def __post_init__(self):
        d = self.descriptor
        if self.decay_s <= 0:
            raise ValidationError(f"descriptor {d!r}: decay_s must be > 0, got {self.decay_s}")
        if not 0.0 <= self.feedback_gain < 1.0:
            raise ValidationError(
                f"descriptor {d!r}: feedback_gain must be in [0, 1), got {self.feedback_gain}"
            )
        if self.modulation_hz < 0:
            raise ValidationError(
                f"descriptor {d!r}: modulation_hz must be >= 0, got {self.modulation_hz}"
            )
        if self.modulation_depth_ms < 0:
            raise ValidationError(
                f"descriptor {d!r}: modulation_depth_ms must be >= 0, "
                f"got {self.modulation_depth_ms}"
            )
        if self.lowpass_hz <= 0:
            raise ValidationError(
                f"descriptor {d!r}: lowpass_hz must be > 0, got {self.lowpass_hz}"
            )
        if self.effect_gain < 0:
            raise ValidationError(
                f"descriptor {d!r}: effect_gain must be >= 0, got {self.effect_gain}"
            )
        if not 0.0 <= self.wet_dry <= 1.0:
            raise ValidationError(
                f"descriptor {d!r}: wet_dry must be in [0, 1], got {self.wet_dry}"
            )

    def to_dict(self) -> dict:
        return {
            "descriptor": self.descriptor,
            "decay_s": self.decay_s,
            "feedback_gain": self.feedback_gain,
            "modulation_hz": self.modulation_hz,
            "modulation_depth_ms": self.modulation_depth_ms,
            "lowpass_hz": self.lowpass_hz,
            "effect_gain": self.effect_gain,
            "wet_dry": self.wet_dry,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "ReverbSettings":
        try:
            return cls(
                descriptor=record["descriptor"],
                decay_s=float(record["decay_s"]),
                feedback_gain=float(record["feedback_gain"]),
                modulation_hz=float(record["modulation_hz"]),
                modulation_depth_ms=float(record["modulation_depth_ms"]),
                lowpass_hz=float(record["lowpass_hz"]),
                effect_gain=float(record["effect_gain"]),
                wet_dry=float(record["wet_dry"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed reverb record: {exc}") from exc


@dataclass(frozen=True)
class EffectLevel:
    value: float

    def __post_init__(self):
        if not 0.0 < self.value <= 1.0:
            raise ValidationError(f"effect level must be in (0, 1], got {self.value}")


def settings_hash(settings: EqSettings | ReverbSettings) -> str:
    """Stable content hash of an effect's parameters (descriptor included)."""
    payload = json.dumps(settings.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]
