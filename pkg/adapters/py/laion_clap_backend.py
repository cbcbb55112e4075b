#!/usr/bin/env python3
"""LAION-CLAP backend: embeds audio files and text prompts with laion_clap."""

import sys

from _backend_common import run_backend


def embed_batch(items, sample_rate):
    import laion_clap  # heavyweight; imported lazily

    model = laion_clap.CLAP_Module(enable_fusion=False)
    model.load_ckpt()
    model.eval()
    vectors = {}
    audio_items = [it for it in items if it["kind"] == "audio"]
    text_items = [it for it in items if it["kind"] == "text"]
    if audio_items:
        embs = model.get_audio_embedding_from_filelist(
            [it["payload"] for it in audio_items], use_tensor=False
        )
        for it, emb in zip(audio_items, embs):
            vectors[it["id"]] = [float(v) for v in emb]
    if text_items:
        embs = model.get_text_embedding([it["payload"] for it in text_items], use_tensor=False)
        for it, emb in zip(text_items, embs):
            vectors[it["id"]] = [float(v) for v in emb]
    return vectors


if __name__ == "__main__":
    sys.exit(run_backend(embed_batch))
