"""Run configuration: one JSON file capturing every choice, plus flag overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from timbrebench.embeddings import AdapterSpec
from timbrebench.errors import ValidationError
from timbrebench.stats import DEFAULT_TREND_TOLERANCE

CACHE_ENV_VAR = "TIMBREBENCH_CACHE_DIR"
DEFAULT_LEVELS = (0.3, 0.6, 1.0)


@dataclass(frozen=True)
class RunConfig:
    adapters: tuple[AdapterSpec, ...]
    output_dir: Path
    reference_audio: Path | None = None
    ratings_csv: Path | None = None
    instrument_audio_dir: Path | None = None
    eq_settings: Path | None = None
    reverb_settings: Path | None = None
    levels: tuple[float, ...] = DEFAULT_LEVELS
    tolerance: float = DEFAULT_TREND_TOLERANCE
    prompt_template: str | None = None

    def __post_init__(self):
        if not self.adapters:
            raise ValidationError("config must name at least one adapter")
        if not self.levels:
            raise ValidationError("level set must be non-empty")
        if any(not 0.0 < lv <= 1.0 for lv in self.levels):
            raise ValidationError("levels must lie in (0, 1]")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ValidationError("levels must be strictly increasing")
        if self.tolerance < 0:
            raise ValidationError("tolerance must be >= 0")
        names = [a.model_name for a in self.adapters]
        if len(set(names)) != len(names):
            raise ValidationError("adapter model names must be unique")

    @property
    def cache_dir(self) -> Path:
        env = os.environ.get(CACHE_ENV_VAR)
        if env:
            return Path(env)
        return self.output_dir / ".cache"

    def require(self, *fields: str) -> None:
        """Fail with a named message if a path field is unset or missing on disk."""
        for name in fields:
            value = getattr(self, name)
            if value is None:
                raise ValidationError(f"config field {name!r} is required for this command")
            if not Path(value).exists():
                raise ValidationError(f"config field {name!r}: path does not exist: {value}")

    def format_text_payload(self, descriptor: str) -> str:
        if self.prompt_template is None:
            return descriptor
        return self.prompt_template.format(descriptor=descriptor)


def load_config(
    path,
    adapter_filter: str | None = None,
    levels_override: tuple[float, ...] | None = None,
    tolerance_override: float | None = None,
    output_override: str | None = None,
) -> RunConfig:
    """Read the config file and apply CLI flag overrides (flags win)."""
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON: {exc}") from exc

    try:
        adapters = tuple(
            AdapterSpec(
                command=entry["command"],
                model_name=entry["name"],
                expected_dim=entry.get("expected_dim"),
            )
            for entry in raw["adapters"]
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{path}: malformed adapters section: {exc}") from exc

    if adapter_filter is not None:
        adapters = tuple(a for a in adapters if a.model_name == adapter_filter)
        if not adapters:
            raise ValidationError(f"no adapter named {adapter_filter!r} in config")

    def _path(key: str) -> Path | None:
        value = raw.get(key)
        if value is None:
            return None
        p = Path(value)
        return p if p.is_absolute() else path.parent / p

    output_dir = Path(output_override) if output_override else _path("output_dir")
    if output_dir is None:
        raise ValidationError(f"{path}: output_dir is required")

    return RunConfig(
        adapters=adapters,
        output_dir=output_dir,
        reference_audio=_path("reference_audio"),
        ratings_csv=_path("ratings_csv"),
        instrument_audio_dir=_path("instrument_audio_dir"),
        eq_settings=_path("eq_settings"),
        reverb_settings=_path("reverb_settings"),
        levels=tuple(levels_override or raw.get("levels", DEFAULT_LEVELS)),
        tolerance=(
            tolerance_override
            if tolerance_override is not None
            else float(raw.get("tolerance", DEFAULT_TREND_TOLERANCE))
        ),
        prompt_template=raw.get("prompt_template"),
    )
