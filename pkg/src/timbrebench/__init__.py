"""Benchmark harness for timbre-semantic alignment of language-audio embeddings."""

from timbrebench.audio import AudioBuffer, downmix_mono, read_wav, write_wav
from timbrebench.embeddings import Embedding, cosine_similarity
from timbrebench.stats import TrendClass, classify_trend, pearson

__all__ = [
    "AudioBuffer",
    "Embedding",
    "TrendClass",
    "classify_trend",
    "cosine_similarity",
    "downmix_mono",
    "pearson",
    "read_wav",
    "write_wav",
]

__version__ = "0.1.0"
