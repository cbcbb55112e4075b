"""Shared scaffolding for the model backend scripts.

Each backend receives a job JSON ({model, sample_rate, items}) whose audio
payloads are already mono float32 WAVs at the model's native rate, and writes
a result JSON mapping request id -> embedding vector.
"""

import json
import sys


def run_backend(embed_batch):
    """CLI wrapper: embed_batch(items, sample_rate) -> {id: [float, ...]}."""
    if len(sys.argv) != 3:
        print(f"usage: {sys.argv[0]} <job.json> <result.json>", file=sys.stderr)
        return 2
    with open(sys.argv[1], encoding="utf-8") as fh:
        job = json.load(fh)
    try:
        vectors = embed_batch(job["items"], job["sample_rate"])
    except ModuleNotFoundError as exc:
        print(
            f"backend for {job['model']} requires the '{exc.name}' package, "
            f"which is not installed: {exc}",
            file=sys.stderr,
        )
        return 3
    with open(sys.argv[2], "w", encoding="utf-8") as fh:
        json.dump({"vectors": vectors}, fh)
    return 0
