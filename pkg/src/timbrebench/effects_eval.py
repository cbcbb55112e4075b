"""Experiment 2: render descriptor-specific effect variants and classify trends."""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from timbrebench.audio import AudioBuffer, write_wav
from timbrebench.effects.params import EffectLevel, EqSettings, ReverbSettings, settings_hash
from timbrebench.effects.render import fx
from timbrebench.embeddings import Embedding, cosine_similarity
from timbrebench.errors import TimbreBenchError, ValidationError
from timbrebench.stats import TrendClass, classify_trend

REFERENCE_ID = "reference"


@dataclass(frozen=True)
class DescriptorSettingsMap:
    eq: dict[str, EqSettings]
    reverb: dict[str, ReverbSettings]


@dataclass(frozen=True)
class ManifestItem:
    item_id: str
    path: str
    descriptor: str | None
    effect: str | None  # "eq" | "reverb" | None for the reference
    level: float | None
    provenance_hash: str

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "path": self.path,
            "descriptor": self.descriptor,
            "effect": self.effect,
            "level": self.level,
            "provenance_hash": self.provenance_hash,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "ManifestItem":
        return cls(
            item_id=record["item_id"],
            path=record["path"],
            descriptor=record.get("descriptor"),
            effect=record.get("effect"),
            level=record.get("level"),
            provenance_hash=record["provenance_hash"],
        )


@dataclass(frozen=True)
class DeltaRecord:
    descriptor: str
    effect: str
    level: float
    delta: float


def load_settings(eq_path, reverb_path) -> DescriptorSettingsMap:
    """Parse the JSONL settings files (one record per descriptor, per effect)."""
    eq: dict[str, EqSettings] = {}
    for lineno, record in _read_jsonl(eq_path):
        try:
            settings = EqSettings.from_dict(record)
        except ValidationError as exc:
            raise ValidationError(f"{eq_path}, line {lineno}: {exc}") from exc
        if settings.descriptor in eq:
            raise ValidationError(
                f"{eq_path}, line {lineno}: duplicate descriptor {settings.descriptor!r}"
            )
        eq[settings.descriptor] = settings

    reverb: dict[str, ReverbSettings] = {}
    for lineno, record in _read_jsonl(reverb_path):
        try:
            settings = ReverbSettings.from_dict(record)
        except ValidationError as exc:
            raise ValidationError(f"{reverb_path}, line {lineno}: {exc}") from exc
        if settings.descriptor in reverb:
            raise ValidationError(
                f"{reverb_path}, line {lineno}: duplicate descriptor {settings.descriptor!r}"
            )
        reverb[settings.descriptor] = settings

    return DescriptorSettingsMap(eq=eq, reverb=reverb)


def _read_jsonl(path):
    path = Path(path)
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            yield lineno, json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}, line {lineno}: invalid JSON: {exc}") from exc


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_-]+", "_", text)


def render_variants(
    reference: AudioBuffer,
    settings_map: DescriptorSettingsMap,
    levels: Sequence[EffectLevel],
    out_dir,
) -> tuple[list[ManifestItem], int]:
    """Render one file per (descriptor, effect, level) plus the reference.

    Files are content-addressed by (reference hash, settings hash, level);
    re-runs reuse existing files. Returns (manifest items, cache hit count).
    """
    if not levels:
        raise ValidationError("level set must be non-empty")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    ref_hash = hashlib.sha256(reference.samples.tobytes()).hexdigest()[:16]
    items: list[ManifestItem] = []
    cache_hits = 0

    ref_path = out_dir / f"reference__{ref_hash}.wav"
    if ref_path.exists():
        cache_hits += 1
    else:
        write_wav(reference, ref_path, format="float32")
    items.append(
        ManifestItem(
            item_id=REFERENCE_ID,
            path=str(ref_path),
            descriptor=None,
            effect=None,
            level=None,
            provenance_hash=ref_hash,
        )
    )

    jobs: list[tuple[str, str, EqSettings | ReverbSettings]] = []
    for descriptor in sorted(settings_map.eq):
        jobs.append(("eq", descriptor, settings_map.eq[descriptor]))
    for descriptor in sorted(settings_map.reverb):
        jobs.append(("reverb", descriptor, settings_map.reverb[descriptor]))

    for effect, descriptor, settings in jobs:
        s_hash = settings_hash(settings)
        for level in levels:
            prov = hashlib.sha256(
                f"{ref_hash}:{s_hash}:{level.value!r}".encode("utf-8")
            ).hexdigest()[:16]
            item_id = f"{effect}__{_slug(descriptor)}__{level.value:g}"
            path = out_dir / f"{item_id}__{prov}.wav"
            if path.exists():
                cache_hits += 1
            else:
                try:
                    rendered = fx(reference, settings, level)
                except TimbreBenchError as exc:
                    raise type(exc)(f"descriptor {descriptor!r} ({effect}): {exc}") from exc
                write_wav(rendered, path, format="float32")
            items.append(
                ManifestItem(
                    item_id=item_id,
                    path=str(path),
                    descriptor=descriptor,
                    effect=effect,
                    level=level.value,
                    provenance_hash=prov,
                )
            )
    return items, cache_hits


def save_manifest(items: Sequence[ManifestItem], path) -> None:
    Path(path).write_text(
        "".join(json.dumps(item.to_dict(), separators=(",", ":")) + "\n" for item in items),
        encoding="utf-8",
    )


def load_manifest(path) -> list[ManifestItem]:
    items = []
    for lineno, record in _read_jsonl(path):
        try:
            items.append(ManifestItem.from_dict(record))
        except KeyError as exc:
            raise ValidationError(f"{path}, line {lineno}: missing field {exc}") from exc
    return items


def compute_deltas(
    text_embs: Mapping[str, Embedding],
    audio_embs: Mapping[str, Embedding],
    manifest: Sequence[ManifestItem],
) -> list[DeltaRecord]:
    """delta = sim(descriptor, processed) - sim(descriptor, reference)."""
    reference = next((item for item in manifest if item.effect is None), None)
    if reference is None:
        raise ValidationError("manifest has no reference item")
    if reference.item_id not in audio_embs:
        raise ValidationError(f"missing embedding for manifest item {reference.item_id!r}")
    ref_emb = audio_embs[reference.item_id]

    records: list[DeltaRecord] = []
    for item in manifest:
        if item.effect is None:
            continue
        if item.item_id not in audio_embs:
            raise ValidationError(f"missing embedding for manifest item {item.item_id!r}")
        if item.descriptor not in text_embs:
            raise ValidationError(f"missing text embedding for descriptor {item.descriptor!r}")
        t_d = text_embs[item.descriptor]
        delta = cosine_similarity(t_d, audio_embs[item.item_id]) - cosine_similarity(
            t_d, ref_emb
        )
        records.append(
            DeltaRecord(
                descriptor=item.descriptor, effect=item.effect, level=item.level, delta=delta
            )
        )
    return records


def build_trend_table(
    deltas: Sequence[DeltaRecord],
    levels: Sequence[float],
    tolerance: float,
) -> dict[str, dict[str, TrendClass]]:
    """Per effect, per descriptor (sorted): classify the level-ordered deltas."""
    levels = sorted(levels)
    by_key: dict[tuple[str, str], dict[float, float]] = {}
    for rec in deltas:
        slot = by_key.setdefault((rec.effect, rec.descriptor), {})
        if rec.level in slot:
            raise ValidationError(
                f"duplicate delta for ({rec.descriptor!r}, {rec.effect}, level {rec.level})"
            )
        slot[rec.level] = rec.delta

    table: dict[str, dict[str, TrendClass]] = {}
    for (effect, descriptor) in sorted(by_key):
        slot = by_key[(effect, descriptor)]
        missing = [lv for lv in levels if lv not in slot]
        if missing:
            raise ValidationError(
                f"descriptor {descriptor!r} ({effect}): missing delta for level {missing[0]:g}"
            )
        triple = [slot[lv] for lv in levels]
        table.setdefault(effect, {})[descriptor] = classify_trend(triple, tolerance)
    return table
