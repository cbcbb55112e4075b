import json

import numpy as np
import pytest

from timbrebench.audio import AudioBuffer
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
from timbrebench.embeddings import Embedding
from timbrebench.errors import ValidationError
from timbrebench.stats import TrendClass

FS = 8000
LEVELS = [EffectLevel(v) for v in (0.3, 0.6, 1.0)]


def eq_record(descriptor, gain_db=3.0):
    centers = np.geomspace(50.0, 3500.0, 40)
    return {
        "descriptor": descriptor,
        "bands": [
            {"freq_hz": float(c), "bandwidth_hz": float(c / 2), "gain_db": gain_db}
            for c in centers
        ],
    }


def reverb_record(descriptor):
    return {
        "descriptor": descriptor,
        "decay_s": 0.05,
        "feedback_gain": 0.7,
        "modulation_hz": 0.0,
        "modulation_depth_ms": 0.0,
        "lowpass_hz": 3000.0,
        "effect_gain": 0.5,
        "wet_dry": 0.8,
    }


def write_settings(tmp_path, eq_descriptors, reverb_descriptors):
    eq_path = tmp_path / "eq.jsonl"
    eq_path.write_text("".join(json.dumps(eq_record(d)) + "\n" for d in eq_descriptors))
    rv_path = tmp_path / "reverb.jsonl"
    rv_path.write_text(
        "".join(json.dumps(reverb_record(d)) + "\n" for d in reverb_descriptors)
    )
    return eq_path, rv_path


def reference_buffer():
    rng = np.random.default_rng(9)
    return AudioBuffer(rng.normal(scale=0.1, size=FS // 4), FS)


class TestLoadSettings:
    def test_valid_top20(self, tmp_path):
        names = [f"desc{i:02d}" for i in range(20)]
        eq_path, rv_path = write_settings(tmp_path, names, names)
        settings = load_settings(eq_path, rv_path)
        assert len(settings.eq) == 20
        assert len(settings.reverb) == 20

    def test_wrong_band_count(self, tmp_path):
        _, rv_path = write_settings(tmp_path, [], ["warm"])
        record = eq_record("warm")
        record["bands"] = record["bands"][:39]
        eq_path = tmp_path / "bad_eq.jsonl"
        eq_path.write_text(json.dumps(record) + "\n")
        with pytest.raises(ValidationError, match="'warm'.*expected 40 bands"):
            load_settings(eq_path, rv_path)

    def test_wet_dry_range(self, tmp_path):
        eq_path, _ = write_settings(tmp_path, [], [])
        record = reverb_record("hall")
        record["wet_dry"] = 1.2
        rv_path = tmp_path / "bad_reverb.jsonl"
        rv_path.write_text(json.dumps(record) + "\n")
        with pytest.raises(ValidationError, match="wet_dry"):
            load_settings(eq_path, rv_path)


class TestRenderVariants:
    def test_seven_items_for_shared_descriptor(self, tmp_path):
        eq_path, rv_path = write_settings(tmp_path, ["warm"], ["warm"])
        settings = load_settings(eq_path, rv_path)
        items, _ = render_variants(reference_buffer(), settings, LEVELS, tmp_path / "out")
        assert len(items) == 7  # 1 reference + 2 effects x 3 levels
        assert sum(1 for i in items if i.effect is None) == 1

    def test_full_scale_counts(self, tmp_path):
        names = [f"d{i:02d}" for i in range(20)]
        eq_path, rv_path = write_settings(tmp_path, names, names)
        settings = load_settings(eq_path, rv_path)
        items, hits = render_variants(reference_buffer(), settings, LEVELS, tmp_path / "out")
        assert len(items) == 20 * 3 + 20 * 3 + 1
        assert hits == 0

    def test_rerun_reuses_cache(self, tmp_path):
        eq_path, rv_path = write_settings(tmp_path, ["warm"], ["warm"])
        settings = load_settings(eq_path, rv_path)
        ref = reference_buffer()
        items1, _ = render_variants(ref, settings, LEVELS, tmp_path / "out")
        items2, hits = render_variants(ref, settings, LEVELS, tmp_path / "out")
        assert hits == len(items1)
        assert [i.provenance_hash for i in items1] == [i.provenance_hash for i in items2]

    def test_empty_level_set_rejected(self, tmp_path):
        eq_path, rv_path = write_settings(tmp_path, ["warm"], [])
        settings = load_settings(eq_path, rv_path)
        with pytest.raises(ValidationError, match="non-empty"):
            render_variants(reference_buffer(), settings, [], tmp_path / "out")

    def test_manifest_round_trip(self, tmp_path):
        eq_path, rv_path = write_settings(tmp_path, ["warm"], ["warm"])
        settings = load_settings(eq_path, rv_path)
        items, _ = render_variants(reference_buffer(), settings, LEVELS, tmp_path / "out")
        manifest_path = tmp_path / "manifest.jsonl"
        save_manifest(items, manifest_path)
        assert load_manifest(manifest_path) == items


def embedding(id, vector, kind="audio"):
    return Embedding(id=id, kind=kind, model="m", vector=np.asarray(vector, dtype=float))


class TestComputeDeltas:
    def _manifest(self, tmp_path):
        eq_path, rv_path = write_settings(tmp_path, ["warm"], [])
        settings = load_settings(eq_path, rv_path)
        items, _ = render_variants(reference_buffer(), settings, LEVELS, tmp_path / "out")
        return items

    def test_identical_embedding_gives_zero_delta(self, tmp_path):
        items = self._manifest(tmp_path)
        v = [0.3, 0.4]
        audio = {item.item_id: embedding(item.item_id, v) for item in items}
        text = {"warm": embedding("warm", [1.0, 0.0], kind="text")}
        deltas = compute_deltas(text, audio, items)
        assert all(rec.delta == pytest.approx(0.0, abs=1e-12) for rec in deltas)

    def test_extreme_delta_is_one(self, tmp_path):
        items = self._manifest(tmp_path)
        text = {"warm": embedding("warm", [1.0, 0.0], kind="text")}
        audio = {}
        for item in items:
            vec = [0.0, 1.0] if item.effect is None else [1.0, 0.0]
            audio[item.item_id] = embedding(item.item_id, vec)
        deltas = compute_deltas(text, audio, items)
        assert all(rec.delta == pytest.approx(1.0, abs=1e-12) for rec in deltas)

    def test_subtraction_oracle(self, tmp_path):
        items = self._manifest(tmp_path)
        sims = {None: 0.10, 0.3: 0.12, 0.6: 0.15, 1.0: 0.19}
        # 2-D construction: vector at angle acos(s) from the descriptor axis.
        text = {"warm": embedding("warm", [1.0, 0.0], kind="text")}
        audio = {
            item.item_id: embedding(
                item.item_id,
                [sims[item.level], np.sqrt(1 - sims[item.level] ** 2)],
            )
            for item in items
        }
        deltas = {rec.level: rec.delta for rec in compute_deltas(text, audio, items)}
        assert deltas[0.3] == pytest.approx(0.02, abs=1e-12)
        assert deltas[0.6] == pytest.approx(0.05, abs=1e-12)
        assert deltas[1.0] == pytest.approx(0.09, abs=1e-12)

    def test_missing_embedding_named(self, tmp_path):
        items = self._manifest(tmp_path)
        text = {"warm": embedding("warm", [1.0, 0.0], kind="text")}
        audio = {item.item_id: embedding(item.item_id, [1.0, 0.0]) for item in items[:-1]}
        with pytest.raises(ValidationError, match=items[-1].item_id):
            compute_deltas(text, audio, items)


class TestTrendTable:
    def test_monotone_up_and_down(self):
        deltas = [
            DeltaRecord("warm", "eq", 0.3, 0.02),
            DeltaRecord("warm", "eq", 0.6, 0.05),
            DeltaRecord("warm", "eq", 1.0, 0.09),
        ]
        table = build_trend_table(deltas, [0.3, 0.6, 1.0], tolerance=1e-4)
        assert table["eq"]["warm"] is TrendClass.MONOTONIC_UP
        flipped = [DeltaRecord(d.descriptor, d.effect, d.level, -d.delta) for d in deltas]
        table = build_trend_table(flipped, [0.3, 0.6, 1.0], tolerance=1e-4)
        assert table["eq"]["warm"] is TrendClass.MONOTONIC_DOWN

    def test_missing_level_named(self):
        deltas = [
            DeltaRecord("warm", "eq", 0.3, 0.02),
            DeltaRecord("warm", "eq", 1.0, 0.09),
        ]
        with pytest.raises(ValidationError, match="0.6"):
            build_trend_table(deltas, [0.3, 0.6, 1.0], tolerance=1e-4)

    def test_rows_sorted_alphabetically(self):
        deltas = []
        for d in ("warm", "bright", "calm"):
            for lv, val in ((0.3, 0.01), (0.6, 0.02), (1.0, 0.03)):
                deltas.append(DeltaRecord(d, "eq", lv, val))
        table = build_trend_table(deltas, [0.3, 0.6, 1.0], tolerance=1e-4)
        assert list(table["eq"]) == ["bright", "calm", "warm"]
