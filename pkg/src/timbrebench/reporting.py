"""Command implementations behind the CLI: render, embed, evaluate, report.

All outputs are deterministic (sorted axes, fixed float formatting) and files
are written atomically (temp + rename).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from timbrebench.audio import read_wav
from timbrebench.config import RunConfig
from timbrebench.effects.params import EffectLevel
from timbrebench.effects_eval import (
    DeltaRecord,
    build_trend_table,
    compute_deltas,
    load_manifest,
    load_settings,
    render_variants,
    save_manifest,
)
from timbrebench.embeddings import (
    EmbedRequest,
    Embedding,
    run_adapter,
    save_embeddings,
)
from timbrebench.errors import ValidationError
from timbrebench.instruments import (
    RatingsTable,
    compute_similarity_matrix,
    descriptor_level_correlation,
    group_summaries,
    instrument_level_correlation,
    load_ratings_csv,
)
from timbrebench.stats import TREND_LEGEND, TrendClass, summarize_correlations

MANIFEST_NAME = "manifest.jsonl"


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(float(value))


# ---------------------------------------------------------------- render


def cmd_render(config: RunConfig) -> tuple[Path, int, int]:
    """Render all effect variants; returns (manifest path, item count, cache hits)."""
    config.require("reference_audio", "eq_settings", "reverb_settings")
    reference = read_wav(config.reference_audio)
    settings_map = load_settings(config.eq_settings, config.reverb_settings)
    levels = [EffectLevel(v) for v in config.levels]
    items, cache_hits = render_variants(
        reference, settings_map, levels, config.output_dir / "renders"
    )
    manifest_path = config.output_dir / MANIFEST_NAME
    config.output_dir.mkdir(parents=True, exist_ok=True)
    save_manifest(items, manifest_path)
    return manifest_path, len(items), cache_hits


# ------------------------------------------------------------ embeddings


def _instrument_clips(config: RunConfig, table: RatingsTable) -> dict[str, list[Path]]:
    """Locate <id>.wav and <id>__*.wav clips per instrument."""
    root = Path(config.instrument_audio_dir)
    clips: dict[str, list[Path]] = {}
    for inst in table.instruments:
        found = sorted(root.glob(f"{inst.id}.wav")) + sorted(root.glob(f"{inst.id}__*.wav"))
        if not found:
            raise ValidationError(f"no audio clip for instrument {inst.id!r} in {root}")
        clips[inst.id] = found
    return clips


def _instrument_requests(
    config: RunConfig, table: RatingsTable
) -> tuple[list[EmbedRequest], dict[str, list[str]]]:
    clips = _instrument_clips(config, table)
    requests = [
        EmbedRequest(id=f"text__{d}", kind="text", payload=config.format_text_payload(d))
        for d in table.descriptors
    ]
    clip_ids: dict[str, list[str]] = {}
    for inst in table.instruments:
        ids = []
        for k, clip in enumerate(clips[inst.id]):
            rid = f"inst__{inst.id}__{k}"
            requests.append(EmbedRequest(id=rid, kind="audio", payload=str(clip)))
            ids.append(rid)
        clip_ids[inst.id] = ids
    return requests, clip_ids


def _effects_requests(config: RunConfig, manifest) -> list[EmbedRequest]:
    descriptors = sorted({item.descriptor for item in manifest if item.descriptor is not None})
    requests = [
        EmbedRequest(id=f"text__{d}", kind="text", payload=config.format_text_payload(d))
        for d in descriptors
    ]
    requests += [
        EmbedRequest(id=f"audio__{item.item_id}", kind="audio", payload=item.path)
        for item in manifest
    ]
    return requests


def _mean_audio_embedding(
    model: str, inst_id: str, parts: list[Embedding]
) -> Embedding:
    # Cosine is scale-invariant, so the mean is used without renormalization.
    mean = np.mean([p.vector for p in parts], axis=0)
    return Embedding(id=inst_id, kind="audio", model=model, vector=mean)


def cmd_embed(config: RunConfig) -> list[Path]:
    """Pre-compute and persist embeddings for whichever experiments are configured."""
    written: list[Path] = []
    emb_dir = config.output_dir / "embeddings"
    manifest_path = config.output_dir / MANIFEST_NAME
    for spec in config.adapters:
        if config.ratings_csv is not None:
            config.require("ratings_csv", "instrument_audio_dir")
            table = load_ratings_csv(config.ratings_csv)
            requests, _ = _instrument_requests(config, table)
            embs = run_adapter(spec, requests, cache_dir=config.cache_dir)
            out = emb_dir / f"instruments__{spec.model_name}.jsonl"
            out.parent.mkdir(parents=True, exist_ok=True)
            save_embeddings(embs, out)
            written.append(out)
        if manifest_path.exists():
            manifest = load_manifest(manifest_path)
            embs = run_adapter(
                spec, _effects_requests(config, manifest), cache_dir=config.cache_dir
            )
            out = emb_dir / f"effects__{spec.model_name}.jsonl"
            out.parent.mkdir(parents=True, exist_ok=True)
            save_embeddings(embs, out)
            written.append(out)
    if not written:
        raise ValidationError(
            "nothing to embed: configure ratings_csv and/or run `render` first"
        )
    return written


# ---------------------------------------------------------- experiment 1


def cmd_eval_instruments(config: RunConfig) -> list[Path]:
    """Experiment 1: similarity matrix, both correlation analyses, scatter data."""
    config.require("ratings_csv", "instrument_audio_dir")
    table = load_ratings_csv(config.ratings_csv)
    out_dir = config.output_dir / "instruments"
    written: list[Path] = []

    for spec in config.adapters:
        requests, clip_ids = _instrument_requests(config, table)
        embs = {e.id: e for e in run_adapter(spec, requests, cache_dir=config.cache_dir)}
        text_embs = {d: embs[f"text__{d}"] for d in table.descriptors}
        audio_embs = {
            inst.id: _mean_audio_embedding(
                spec.model_name, inst.id, [embs[rid] for rid in clip_ids[inst.id]]
            )
            for inst in table.instruments
        }
        sims = compute_similarity_matrix(table, audio_embs, text_embs)
        per_descriptor = descriptor_level_correlation(sims, table)
        per_instrument = instrument_level_correlation(sims, table)

        rows = ["descriptor,r"]
        rows += [f"{d},{_fmt(per_descriptor[d])}" for d in table.descriptors]
        path = out_dir / f"descriptor_level__{spec.model_name}.csv"
        _write_atomic(path, "\n".join(rows) + "\n")
        written.append(path)

        rows = ["instrument_id,instrument_name,group,r"]
        rows += [
            f"{inst.id},{inst.name},{inst.group},{_fmt(r)}" for inst, r in per_instrument
        ]
        path = out_dir / f"instrument_level__{spec.model_name}.csv"
        _write_atomic(path, "\n".join(rows) + "\n")
        written.append(path)

        rows = ["instrument_id,descriptor,human_rating,similarity"]
        for i, inst in enumerate(table.instruments):
            for j, d in enumerate(table.descriptors):
                rows.append(
                    f"{inst.id},{d},{table.ratings[i, j]!r},{sims.similarities[i, j]!r}"
                )
        path = out_dir / f"scatter__{spec.model_name}.csv"
        _write_atomic(path, "\n".join(rows) + "\n")
        written.append(path)

        desc_summary = summarize_correlations(list(per_descriptor.items()))
        groups = group_summaries(per_instrument)
        summary = {
            "model": spec.model_name,
            "descriptor_level": _summary_dict(desc_summary),
            "instrument_level": {name: _summary_dict(s) for name, s in groups.items()},
        }
        path = out_dir / f"summary__{spec.model_name}.json"
        _write_atomic(path, json.dumps(summary, indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written


def _summary_dict(summary) -> dict:
    return {
        "positive_count": summary.positive_count,
        "negative_count": summary.negative_count,
        "mean_r": summary.mean_r,
        "total": summary.total,
        "undefined_count": summary.undefined_count,
    }


# ---------------------------------------------------------- experiment 2


def cmd_eval_effects(config: RunConfig) -> list[Path]:
    """Experiment 2: deltas per (descriptor, effect, level) and trend tables."""
    manifest_path = config.output_dir / MANIFEST_NAME
    if not manifest_path.exists():
        cmd_render(config)
    manifest = load_manifest(manifest_path)
    out_dir = config.output_dir / "effects"
    written: list[Path] = []

    all_deltas: dict[str, list[DeltaRecord]] = {}
    tables: dict[str, dict[str, dict[str, TrendClass]]] = {}
    for spec in config.adapters:
        embs = {
            e.id: e
            for e in run_adapter(
                spec, _effects_requests(config, manifest), cache_dir=config.cache_dir
            )
        }
        descriptors = sorted(
            {item.descriptor for item in manifest if item.descriptor is not None}
        )
        text_embs = {d: embs[f"text__{d}"] for d in descriptors}
        audio_embs = {
            item.item_id: embs[f"audio__{item.item_id}"] for item in manifest
        }
        deltas = compute_deltas(text_embs, audio_embs, manifest)
        all_deltas[spec.model_name] = deltas
        tables[spec.model_name] = build_trend_table(deltas, config.levels, config.tolerance)

    rows = ["descriptor,effect,level,model,delta"]
    for spec in config.adapters:
        for rec in sorted(
            all_deltas[spec.model_name], key=lambda r: (r.effect, r.descriptor, r.level)
        ):
            rows.append(
                f"{rec.descriptor},{rec.effect},{rec.level:g},{spec.model_name},{rec.delta!r}"
            )
    path = out_dir / "deltas.csv"
    _write_atomic(path, "\n".join(rows) + "\n")
    written.append(path)

    models = [spec.model_name for spec in config.adapters]
    for effect in ("eq", "reverb"):
        descriptors = sorted(
            {d for model in models for d in tables[model].get(effect, {})}
        )
        if not descriptors:
            continue
        lines = ["descriptor," + ",".join(models)]
        for d in descriptors:
            cells = [tables[m].get(effect, {}).get(d, TrendClass.FLAT).symbol for m in models]
            lines.append(f"{d}," + ",".join(cells))
        lines.append("")
        lines.append(f"# Legend: {TREND_LEGEND}")
        path = out_dir / f"trends_{effect}.csv"
        _write_atomic(path, "\n".join(lines) + "\n")
        written.append(path)

    rows = ["model,effect,trend,count"]
    for model in models:
        for effect in sorted(tables[model]):
            counts = {cls: 0 for cls in TrendClass}
            for cls in tables[model][effect].values():
                counts[cls] += 1
            for cls in TrendClass:
                rows.append(f"{model},{effect},{cls.value},{counts[cls]}")
    path = out_dir / "trend_counts.csv"
    _write_atomic(path, "\n".join(rows) + "\n")
    written.append(path)
    return written


# --------------------------------------------------------------- report


def cmd_report(config: RunConfig) -> Path:
    """Merge prior outputs into one human-readable summary document."""
    out = config.output_dir
    missing: list[str] = []
    lines: list[str] = ["# Timbre alignment report", ""]

    inst_dir = out / "instruments"
    summaries = sorted(inst_dir.glob("summary__*.json")) if inst_dir.exists() else []
    eff_dir = out / "effects"
    counts_path = eff_dir / "trend_counts.csv"

    if not summaries:
        missing.append(str(inst_dir / "summary__<model>.json"))
    if not counts_path.exists():
        missing.append(str(counts_path))
    if missing and not summaries and not counts_path.exists():
        raise ValidationError("no upstream outputs found; missing: " + ", ".join(missing))

    if summaries:
        lines.append("## Experiment 1: instrument timbre semantics")
        lines.append("")
        for path in summaries:
            data = json.loads(path.read_text(encoding="utf-8"))
            model = data["model"]
            d = data["descriptor_level"]
            lines.append(
                f"- {model}: {d['positive_count']} of {d['total']} descriptors "
                f"positively correlated (mean r={_round2(d['mean_r'])})"
            )
            for group, s in sorted(data["instrument_level"].items()):
                lines.append(
                    f"  - {group} instruments: {s['positive_count']} of {s['total']} "
                    f"positive (mean r={_round2(s['mean_r'])})"
                )
        lines.append("")

    if counts_path.exists():
        lines.append("## Experiment 2: audio effect timbre semantics")
        lines.append("")
        counts: dict[tuple[str, str], dict[str, int]] = {}
        for row in counts_path.read_text(encoding="utf-8").splitlines()[1:]:
            if not row.strip():
                continue
            model, effect, trend, count = row.split(",")
            counts.setdefault((model, effect), {})[trend] = int(count)
        for (model, effect), by_trend in sorted(counts.items()):
            total = sum(by_trend.values())
            up = by_trend.get("monotonic_up", 0)
            down = by_trend.get("monotonic_down", 0)
            lines.append(
                f"- {model} / {effect}: {up} of {total} descriptors monotonic up, "
                f"{down} monotonic down"
            )
        lines.append("")
        for effect in ("eq", "reverb"):
            table_path = eff_dir / f"trends_{effect}.csv"
            if table_path.exists():
                lines.append(f"### {effect.upper()} trend table")
                lines.append("")
                lines.append("```")
                lines.append(table_path.read_text(encoding="utf-8").rstrip())
                lines.append("```")
                lines.append("")

    lines.append(f"Legend: {TREND_LEGEND}")
    report_path = out / "report.md"
    _write_atomic(report_path, "\n".join(lines) + "\n")
    return report_path


def _round2(value) -> str:
    return "n/a" if value is None else f"{value:.2f}"
