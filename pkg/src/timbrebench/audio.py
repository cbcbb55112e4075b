"""WAV reading/writing and the floating-point sample buffer used everywhere else.

Samples live in float64 arrays shaped (channels, n) and are never clamped
internally; clamping happens only at pcm16 export.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from timbrebench.errors import AudioFormatError, ValidationError

_FORMAT_PCM = 1
_FORMAT_IEEE_FLOAT = 3
_FORMAT_EXTENSIBLE = 0xFFFE


@dataclass(frozen=True)
class AudioBuffer:
    """Multichannel audio: samples shaped (channels, n), float64, plus rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim == 1:
            samples = samples[np.newaxis, :]
        if samples.ndim != 2:
            raise ValidationError(f"samples must be 1-D or 2-D, got {samples.ndim}-D")
        if self.sample_rate <= 0:
            raise ValidationError(f"sample_rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "samples", samples)

    @property
    def channels(self) -> int:
        return self.samples.shape[0]

    @property
    def num_samples(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        return self.num_samples / self.sample_rate

    def __eq__(self, other) -> bool:
        if not isinstance(other, AudioBuffer):
            return NotImplemented
        return (
            self.sample_rate == other.sample_rate
            and self.samples.shape == other.samples.shape
            and bool(np.array_equal(self.samples, other.samples))
        )


def read_wav(path) -> AudioBuffer:
    """Read a PCM16, PCM24, or IEEE-float32 WAV file into an AudioBuffer.

    Integer formats are normalized by full scale; float data is kept as-is.
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise AudioFormatError(f"cannot read {path}: {exc}") from exc

    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise AudioFormatError(f"{path}: unsupported/corrupt WAV (missing RIFF/WAVE header)")

    fmt = None
    raw = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (chunk_size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8 : pos + 8 + chunk_size]
        if chunk_id == b"fmt ":
            if len(body) < 16:
                raise AudioFormatError(f"{path}: unsupported/corrupt WAV (short fmt chunk)")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
            if fmt[0] == _FORMAT_EXTENSIBLE and len(body) >= 40:
                # Subformat GUID starts with the base format tag.
                (sub_tag,) = struct.unpack_from("<H", body, 24)
                fmt = (sub_tag,) + fmt[1:]
        elif chunk_id == b"data":
            if len(body) < chunk_size:
                raise AudioFormatError(f"{path}: unsupported/corrupt WAV (truncated data chunk)")
            raw = body
        pos += 8 + chunk_size + (chunk_size & 1)

    if fmt is None or raw is None:
        raise AudioFormatError(f"{path}: unsupported/corrupt WAV (missing fmt or data chunk)")

    format_tag, channels, sample_rate, _, _, bits = fmt
    if channels < 1:
        raise AudioFormatError(f"{path}: unsupported/corrupt WAV (zero channels)")

    if format_tag == _FORMAT_PCM and bits == 16:
        frames = np.frombuffer(raw[: len(raw) - len(raw) % (2 * channels)], dtype="<i2")
        samples = frames.astype(np.float64) / 32768.0
    elif format_tag == _FORMAT_PCM and bits == 24:
        usable = len(raw) - len(raw) % (3 * channels)
        b = np.frombuffer(raw[:usable], dtype=np.uint8).reshape(-1, 3)
        ints = (
            b[:, 0].astype(np.int32)
            | (b[:, 1].astype(np.int32) << 8)
            | (b[:, 2].astype(np.int32) << 16)
        )
        ints = np.where(ints >= 1 << 23, ints - (1 << 24), ints)
        samples = ints.astype(np.float64) / float(1 << 23)
    elif format_tag == _FORMAT_IEEE_FLOAT and bits == 32:
        frames = np.frombuffer(raw[: len(raw) - len(raw) % (4 * channels)], dtype="<f4")
        samples = frames.astype(np.float64)
    else:
        raise AudioFormatError(
            f"{path}: unsupported WAV encoding (format tag {format_tag}, {bits}-bit); "
            "supported: PCM 16-bit, PCM 24-bit, IEEE float 32-bit"
        )

    if samples.size == 0:
        raise AudioFormatError(f"{path}: zero-length audio")

    samples = samples.reshape(-1, channels).T
    return AudioBuffer(samples=samples, sample_rate=sample_rate)


def write_wav(buffer: AudioBuffer, path, format: str = "float32") -> bool:
    """Write an AudioBuffer as pcm16 or float32 WAV.

    Returns True if any sample had to be clamped (pcm16 only).
    """
    if buffer.num_samples == 0:
        raise ValidationError("cannot write an empty buffer")
    if format not in ("pcm16", "float32"):
        raise ValidationError(f"unknown format {format!r}; expected 'pcm16' or 'float32'")

    interleaved = buffer.samples.T  # (n, channels)
    clamped = False
    if format == "pcm16":
        clamped = bool(np.any(interleaved > 1.0) or np.any(interleaved < -1.0))
        scaled = np.clip(np.round(interleaved * 32768.0), -32768, 32767)
        payload = scaled.astype("<i2").tobytes()
        format_tag, bits = _FORMAT_PCM, 16
    else:
        payload = interleaved.astype("<f4").tobytes()
        format_tag, bits = _FORMAT_IEEE_FLOAT, 32

    channels = buffer.channels
    block_align = channels * bits // 8
    header = b"RIFF" + struct.pack("<I", 36 + len(payload)) + b"WAVE"
    header += b"fmt " + struct.pack(
        "<IHHIIHH",
        16,
        format_tag,
        channels,
        buffer.sample_rate,
        buffer.sample_rate * block_align,
        block_align,
        bits,
    )
    header += b"data" + struct.pack("<I", len(payload))

    path = Path(path)
    try:
        path.write_bytes(header + payload)
    except OSError as exc:
        raise AudioFormatError(f"cannot write {path}: {exc}") from exc
    return clamped


def downmix_mono(buffer: AudioBuffer) -> AudioBuffer:
    """Per-sample arithmetic mean across channels. Idempotent on mono input."""
    if buffer.num_samples == 0:
        raise ValidationError("cannot downmix an empty buffer")
    if buffer.channels == 1:
        return buffer
    mono = buffer.samples.mean(axis=0)
    return AudioBuffer(samples=mono[np.newaxis, :], sample_rate=buffer.sample_rate)
