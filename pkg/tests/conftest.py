import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from svdd.features.audio import save_wav
from svdd.features.types import Waveform

from helpers import sine


@pytest.fixture
def tone_wav(tmp_path):
    """1 s 440 Hz sine at 16 kHz, saved as 16-bit PCM."""
    path = tmp_path / "tone.wav"
    save_wav(path, Waveform(samples=sine(440.0, 1.0, 16000), sample_rate=16000))
    return str(path)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
