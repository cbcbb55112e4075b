"""Experiment 1: instrument-descriptor similarity matrix vs human ratings."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from timbrebench.embeddings import Embedding, cosine_similarity
from timbrebench.errors import ValidationError
from timbrebench.stats import CorrelationSummary, pearson, summarize_correlations

VALID_GROUPS = ("chinese", "western")


@dataclass(frozen=True)
class Instrument:
    id: str
    name: str
    group: str


@dataclass(frozen=True)
class RatingsTable:
    """Mean human ratings h[i][d] on the nine-point scale."""

    instruments: tuple[Instrument, ...]
    descriptors: tuple[str, ...]
    ratings: np.ndarray  # shape (instruments, descriptors)

    def __post_init__(self):
        ratings = np.asarray(self.ratings, dtype=np.float64)
        n_i, n_d = len(self.instruments), len(self.descriptors)
        if ratings.shape != (n_i, n_d):
            raise ValidationError(
                f"ratings shape {ratings.shape} != ({n_i} instruments, {n_d} descriptors)"
            )
        if np.any(ratings < 1.0) or np.any(ratings > 9.0):
            raise ValidationError("ratings must lie in [1, 9]")
        ids = [inst.id for inst in self.instruments]
        if len(set(ids)) != len(ids):
            raise ValidationError("instrument ids must be unique")
        if len(set(self.descriptors)) != len(self.descriptors):
            raise ValidationError("descriptor labels must be unique")
        object.__setattr__(self, "ratings", ratings)


@dataclass(frozen=True)
class SimilarityProfileMatrix:
    """Cosine similarities s[i][d], same axes as the ratings table."""

    instruments: tuple[Instrument, ...]
    descriptors: tuple[str, ...]
    similarities: np.ndarray

    def __post_init__(self):
        sims = np.asarray(self.similarities, dtype=np.float64)
        if sims.shape != (len(self.instruments), len(self.descriptors)):
            raise ValidationError("similarity matrix shape mismatch")
        if not np.all(np.isfinite(sims)):
            raise ValidationError("similarity matrix has non-finite entries")
        object.__setattr__(self, "similarities", sims)


def load_ratings_csv(path) -> RatingsTable:
    """Read the long-format ratings CSV and pivot to a fully-populated matrix.

    Header: instrument_id,instrument_name,group,descriptor,rating.
    """
    path = Path(path)
    instruments: dict[str, Instrument] = {}
    descriptors: list[str] = []
    cells: dict[tuple[str, str], float] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        expected = {"instrument_id", "instrument_name", "group", "descriptor", "rating"}
        if reader.fieldnames is None or not expected.issubset(reader.fieldnames):
            raise ValidationError(f"{path}: expected header columns {sorted(expected)}")
        for lineno, row in enumerate(reader, start=2):
            iid = row["instrument_id"].strip()
            group = row["group"].strip().lower()
            if group not in VALID_GROUPS:
                raise ValidationError(f"{path}, line {lineno}: unknown group {row['group']!r}")
            desc = row["descriptor"].strip()
            try:
                rating = float(row["rating"])
            except ValueError as exc:
                raise ValidationError(
                    f"{path}, line {lineno}: bad rating {row['rating']!r}"
                ) from exc
            if iid not in instruments:
                instruments[iid] = Instrument(iid, row["instrument_name"].strip(), group)
            if desc not in descriptors:
                descriptors.append(desc)
            if (iid, desc) in cells:
                raise ValidationError(
                    f"{path}, line {lineno}: duplicate cell ({iid}, {desc})"
                )
            cells[(iid, desc)] = rating

    if not cells:
        raise ValidationError(f"{path}: no rating rows")
    inst_list = tuple(instruments.values())
    missing = [
        (inst.id, d) for inst in inst_list for d in descriptors if (inst.id, d) not in cells
    ]
    if missing:
        raise ValidationError(f"{path}: missing rating cell ({missing[0][0]}, {missing[0][1]})")
    ratings = np.array(
        [[cells[(inst.id, d)] for d in descriptors] for inst in inst_list]
    )
    return RatingsTable(
        instruments=inst_list, descriptors=tuple(descriptors), ratings=ratings
    )


def compute_similarity_matrix(
    table_axes: RatingsTable,
    audio_embs: Mapping[str, Embedding],
    text_embs: Mapping[str, Embedding],
) -> SimilarityProfileMatrix:
    """s[i][d] = cosine(audio embedding of instrument i, text embedding of d)."""
    for inst in table_axes.instruments:
        if inst.id not in audio_embs:
            raise ValidationError(f"missing audio embedding for instrument {inst.id!r}")
    for desc in table_axes.descriptors:
        if desc not in text_embs:
            raise ValidationError(f"missing text embedding for descriptor {desc!r}")
    sims = np.array(
        [
            [
                cosine_similarity(audio_embs[inst.id], text_embs[desc])
                for desc in table_axes.descriptors
            ]
            for inst in table_axes.instruments
        ]
    )
    return SimilarityProfileMatrix(
        instruments=table_axes.instruments,
        descriptors=table_axes.descriptors,
        similarities=sims,
    )


def _safe_pearson(x: np.ndarray, y: np.ndarray) -> float | None:
    try:
        return pearson(x, y)
    except ValidationError:
        return None  # zero variance: correlation undefined, not zero


def descriptor_level_correlation(
    sims: SimilarityProfileMatrix, table: RatingsTable
) -> dict[str, float | None]:
    """Per descriptor d: Pearson over instruments of h[:, d] vs s[:, d]."""
    _check_axes(sims, table)
    if len(table.instruments) < 3:
        raise ValidationError("need at least 3 instruments")
    return {
        desc: _safe_pearson(table.ratings[:, j], sims.similarities[:, j])
        for j, desc in enumerate(table.descriptors)
    }


def instrument_level_correlation(
    sims: SimilarityProfileMatrix, table: RatingsTable
) -> list[tuple[Instrument, float | None]]:
    """Per instrument i: Pearson across descriptors of h_i vs s_i."""
    _check_axes(sims, table)
    if len(table.descriptors) < 3:
        raise ValidationError("need at least 3 descriptors")
    return [
        (inst, _safe_pearson(table.ratings[i, :], sims.similarities[i, :]))
        for i, inst in enumerate(table.instruments)
    ]


def group_summaries(
    per_instrument: list[tuple[Instrument, float | None]],
) -> dict[str, CorrelationSummary]:
    """Summaries per instrument group plus 'all'."""
    out: dict[str, CorrelationSummary] = {}
    for group in VALID_GROUPS:
        entries = [(inst.id, r) for inst, r in per_instrument if inst.group == group]
        if entries:
            out[group] = summarize_correlations(entries)
    out["all"] = summarize_correlations([(inst.id, r) for inst, r in per_instrument])
    return out


def _check_axes(sims: SimilarityProfileMatrix, table: RatingsTable) -> None:
    if (
        sims.descriptors != table.descriptors
        or tuple(i.id for i in sims.instruments) != tuple(i.id for i in table.instruments)
    ):
        raise ValidationError("similarity matrix axes do not match ratings table")
