#!/usr/bin/env python3
"""MuQ-MuLan backend: embeds audio files and text prompts with muq.MuQMuLan."""

import sys

from _backend_common import run_backend


def _read_mono_float(path):
    # bridge preprocessing always writes mono IEEE float32, which the stdlib
    # wave module refuses; scipy handles the format directly
    from scipy.io import wavfile

    _, data = wavfile.read(path)
    return data


def embed_batch(items, sample_rate):
    import torch
    from muq import MuQMuLan

    model = MuQMuLan.from_pretrained("OpenMuQ/MuQ-MuLan-large")
    model.eval()
    vectors = {}
    with torch.no_grad():
        for it in items:
            if it["kind"] == "audio":
                samples = torch.from_numpy(_read_mono_float(it["payload"])).unsqueeze(0)
                emb = model(wavs=samples)[0]
            else:
                emb = model(texts=[it["payload"]])[0]
            vectors[it["id"]] = [float(v) for v in emb]
    return vectors


if __name__ == "__main__":
    sys.exit(run_backend(embed_batch))
