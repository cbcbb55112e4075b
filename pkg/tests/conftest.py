import json
import sys
from pathlib import Path

import numpy as np
import pytest

from timbrebench.audio import AudioBuffer

HELPERS = Path(__file__).parent / "helpers"
FAKE_ADAPTER = HELPERS / "fake_adapter.py"


def adapter_command(*extra: str) -> str:
    parts = [sys.executable, str(FAKE_ADAPTER), *extra]
    return " ".join(parts)


@pytest.fixture
def sine_buffer():
    fs = 44100
    t = np.arange(fs) / fs
    return AudioBuffer(np.sin(2 * np.pi * 1000.0 * t), fs)


@pytest.fixture
def impulse_buffer():
    fs = 16000
    x = np.zeros(fs // 2)
    x[0] = 1.0
    return AudioBuffer(x, fs)


def write_fixture(path: Path, mapping: dict) -> Path:
    path.write_text(json.dumps(mapping))
    return path
