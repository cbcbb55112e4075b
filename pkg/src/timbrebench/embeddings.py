"""Embedding vectors, cosine similarity, persistence, and the adapter protocol.

Adapters are external executables: the harness writes a requests.jsonl file,
runs `command <requests-path> <response-path>`, and reads Embedding records
back. Responses are cached content-addressed by the request batch hash.
"""

from __future__ import annotations

import hashlib
import json
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from timbrebench.errors import AdapterError, ValidationError


@dataclass(frozen=True)
class Embedding:
    id: str
    kind: str  # "audio" | "text"
    model: str
    vector: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=np.float64)
        if vec.ndim != 1 or vec.size < 1:
            raise ValidationError(f"embedding {self.id!r}: vector must be 1-D and non-empty")
        if not np.all(np.isfinite(vec)):
            raise ValidationError(f"embedding {self.id!r}: non-finite vector entries")
        if self.kind not in ("audio", "text"):
            raise ValidationError(f"embedding {self.id!r}: kind must be 'audio' or 'text'")
        object.__setattr__(self, "vector", vec)

    @property
    def dim(self) -> int:
        return self.vector.size


@dataclass(frozen=True)
class EmbedRequest:
    id: str
    kind: str  # "audio" | "text"
    payload: str  # audio: file path; text: descriptor string

    def __post_init__(self):
        if self.kind not in ("audio", "text"):
            raise ValidationError(f"request {self.id!r}: kind must be 'audio' or 'text'")


@dataclass(frozen=True)
class AdapterSpec:
    command: str
    model_name: str
    expected_dim: int | None = None

    def __post_init__(self):
        if not self.command.strip():
            raise ValidationError("adapter command must be non-empty")


def cosine_similarity(x: Embedding, y: Embedding) -> float:
    """dot(x, y) / (|x| * |y|), in double precision."""
    if x.dim != y.dim:
        raise ValidationError(f"dimension mismatch: {x.id!r} has {x.dim}, {y.id!r} has {y.dim}")
    nx = float(np.linalg.norm(x.vector))
    ny = float(np.linalg.norm(y.vector))
    if nx == 0.0 or ny == 0.0:
        raise ValidationError("cosine similarity undefined for a zero vector")
    sim = float(x.vector @ y.vector) / (nx * ny)
    return max(-1.0, min(1.0, sim))


def save_embeddings(embeddings: Iterable[Embedding], path) -> None:
    """Write line-delimited records {id, kind, model, dim, vector}."""
    lines = []
    for emb in embeddings:
        lines.append(
            json.dumps(
                {
                    "id": emb.id,
                    "kind": emb.kind,
                    "model": emb.model,
                    "dim": emb.dim,
                    "vector": emb.vector.tolist(),
                },
                separators=(",", ":"),
            )
        )
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def load_embeddings(path) -> list[Embedding]:
    """Read an embedding JSONL file; errors carry the offending line number."""
    embeddings: list[Embedding] = []
    seen: set[str] = set()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            emb = Embedding(
                id=record["id"],
                kind=record["kind"],
                model=record["model"],
                vector=np.asarray(record["vector"], dtype=np.float64),
            )
            if int(record["dim"]) != emb.dim:
                raise ValidationError(
                    f"declared dim {record['dim']} != vector length {emb.dim}"
                )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError, ValidationError) as exc:
            raise ValidationError(f"{path}, line {lineno}: malformed record: {exc}") from exc
        if emb.id in seen:
            raise ValidationError(f"{path}, line {lineno}: duplicate id {emb.id!r}")
        seen.add(emb.id)
        embeddings.append(emb)
    return embeddings


def _payload_hash(request: EmbedRequest) -> str:
    if request.kind == "audio":
        try:
            content = Path(request.payload).read_bytes()
        except OSError as exc:
            raise AdapterError(f"request {request.id!r}: cannot read payload: {exc}") from exc
    else:
        content = request.payload.encode("utf-8")
    return hashlib.sha256(content).hexdigest()


def batch_hash(spec: AdapterSpec, requests: Sequence[EmbedRequest]) -> str:
    """Content hash of (model, per-request kind + payload content), order-free."""
    h = hashlib.sha256()
    h.update(spec.model_name.encode("utf-8"))
    for req in sorted(requests, key=lambda r: r.id):
        h.update(b"\0".join([req.id.encode(), req.kind.encode(), _payload_hash(req).encode()]))
    return h.hexdigest()


def run_adapter(
    spec: AdapterSpec,
    requests: Sequence[EmbedRequest],
    cache_dir: Path | str | None = None,
) -> list[Embedding]:
    """Invoke the adapter on a request batch and validate its response.

    Returns embeddings in request order. With cache_dir set, a response for an
    identical batch (same model, same payload contents) is reused verbatim.
    """
    if not requests:
        return []
    ids = [r.id for r in requests]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise AdapterError(f"duplicate request ids: {', '.join(dupes)}")

    cache_path = None
    if cache_dir is not None:
        cache_dir = Path(cache_dir)
        cache_dir.mkdir(parents=True, exist_ok=True)
        cache_path = cache_dir / f"{batch_hash(spec, requests)}.jsonl"
        if cache_path.exists():
            return _validate_response(spec, requests, load_embeddings(cache_path))

    with tempfile.TemporaryDirectory(prefix="timbrebench-adapter-") as tmp:
        requests_path = Path(tmp) / "requests.jsonl"
        response_path = Path(tmp) / "response.jsonl"
        requests_path.write_text(
            "".join(
                json.dumps({"id": r.id, "kind": r.kind, "payload": r.payload}) + "\n"
                for r in requests
            ),
            encoding="utf-8",
        )
        argv = shlex.split(spec.command) + [str(requests_path), str(response_path)]
        proc = subprocess.run(argv, capture_output=True, text=True)
        if proc.returncode != 0:
            raise AdapterError(
                f"adapter {spec.model_name!r} exited {proc.returncode}: "
                f"{proc.stderr.strip() or '(no diagnostic output)'}"
            )
        if not response_path.exists():
            raise AdapterError(f"adapter {spec.model_name!r} wrote no response file")
        embeddings = load_embeddings(response_path)
        result = _validate_response(spec, requests, embeddings)
        if cache_path is not None:
            tmp_cache = cache_path.with_suffix(".tmp")
            save_embeddings(result, tmp_cache)
            tmp_cache.replace(cache_path)
        return result


def _validate_response(
    spec: AdapterSpec, requests: Sequence[EmbedRequest], embeddings: list[Embedding]
) -> list[Embedding]:
    by_id = {emb.id: emb for emb in embeddings}
    missing = [r.id for r in requests if r.id not in by_id]
    if missing:
        raise AdapterError(
            f"adapter {spec.model_name!r} omitted ids: {', '.join(sorted(missing))}"
        )
    extra = sorted(set(by_id) - {r.id for r in requests})
    if extra:
        raise AdapterError(f"adapter {spec.model_name!r} returned unknown ids: {', '.join(extra)}")
    dims = {emb.dim for emb in embeddings}
    if len(dims) != 1:
        raise AdapterError(f"adapter {spec.model_name!r} returned mixed dims: {sorted(dims)}")
    dim = dims.pop()
    if spec.expected_dim is not None and dim != spec.expected_dim:
        raise AdapterError(
            f"adapter {spec.model_name!r}: dim {dim} != expected {spec.expected_dim}"
        )
    for emb in embeddings:
        if float(np.linalg.norm(emb.vector)) == 0.0:
            raise AdapterError(f"adapter {spec.model_name!r}: zero vector for id {emb.id!r}")
    return [by_id[r.id] for r in requests]
