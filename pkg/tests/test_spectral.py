import numpy as np
import pytest

from svdd import oracles
from svdd.features.filterbank import mel_filterbank
from svdd.features.spectral import log_mel_spectrogram
from svdd.features.stft import StftConfig, power_spectrogram
from svdd.features.types import FeatureKind, Waveform

from helpers import sine


def _wav(samples):
    return Waveform(samples=samples, sample_rate=16000)


def test_30s_clip_gives_3000_frames():
    wav = _wav(sine(440.0, 30.0, 16000))
    mel = log_mel_spectrogram(wav)
    assert mel.values.shape == (3000, 80)
    assert mel.kind is FeatureKind.LOGMEL
    assert mel.frame_rate == 100.0


def test_silence_hits_normalized_floor_everywhere():
    mel = log_mel_spectrogram(_wav(np.zeros(16000)))
    # log floor -10, clamp is inert, (x+4)/4 = -1.5
    assert np.all(mel.values == np.float32(-1.5))


def test_white_noise_filterbank_matches_direct_summation(rng):
    wav = _wav(rng.standard_normal(16000) * 0.1)
    cfg = StftConfig()
    power = power_spectrogram(wav, cfg)
    bank = mel_filterbank(16000, cfg.fft_size, 80)
    fast = power @ bank.T
    for t in (0, 17, 50):
        direct = oracles.filterbank_direct(power[t], bank)
        rel = np.abs(fast[t] - direct) / np.maximum(np.abs(direct), 1e-30)
        assert rel.max() < 1e-6


def test_deterministic_bit_identical(rng):
    samples = rng.standard_normal(16000 * 2) * 0.2
    a = log_mel_spectrogram(_wav(samples.copy()))
    b = log_mel_spectrogram(_wav(samples.copy()))
    assert a.values.tobytes() == b.values.tobytes()


def test_rejects_wrong_sample_rate():
    with pytest.raises(ValueError, match="16000"):
        log_mel_spectrogram(Waveform(samples=np.zeros(8000), sample_rate=8000))


def test_rejects_sub_window_input():
    with pytest.raises(ValueError, match="shorter than one window"):
        log_mel_spectrogram(_wav(np.zeros(100)))


def test_normalization_range():
    wav = _wav(sine(1000.0, 2.0, 16000, amp=0.9))
    mel = log_mel_spectrogram(wav)
    # clamp guarantees a dynamic range of at most 8 log10 units, scaled by /4
    assert mel.values.max() - mel.values.min() <= 2.0 + 1e-6
    assert np.all(np.isfinite(mel.values))
