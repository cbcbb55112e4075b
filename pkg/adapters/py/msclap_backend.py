#!/usr/bin/env python3
"""MS-CLAP backend: embeds audio files and text prompts with msclap.CLAP."""

import sys

from _backend_common import run_backend


def embed_batch(items, sample_rate):
    from msclap import CLAP  # heavyweight; imported lazily

    model = CLAP(version="2023", use_cuda=False)
    vectors = {}
    audio_items = [it for it in items if it["kind"] == "audio"]
    text_items = [it for it in items if it["kind"] == "text"]
    if audio_items:
        embs = model.get_audio_embeddings([it["payload"] for it in audio_items])
        for it, emb in zip(audio_items, embs):
            vectors[it["id"]] = [float(v) for v in emb]
    if text_items:
        embs = model.get_text_embeddings([it["payload"] for it in text_items])
        for it, emb in zip(text_items, embs):
            vectors[it["id"]] = [float(v) for v in emb]
    return vectors


if __name__ == "__main__":
    sys.exit(run_backend(embed_batch))
