import numpy as np
import pytest
from scipy.io import wavfile

from svdd.features.audio import AudioError, load_audio, pad_or_trim, resample, save_wav
from svdd.features.types import Waveform

from helpers import fft_peak_hz, sine


def test_silence_is_resample_invariant(tmp_path):
    path = tmp_path / "silence.wav"
    wavfile.write(str(path), 44100, np.zeros(44100, dtype=np.int16))
    wav = load_audio(path, target_rate=16000)
    assert wav.sample_rate == 16000
    assert wav.samples.size == 16000
    assert np.all(wav.samples == 0.0)


def test_sine_survives_resampling(tmp_path):
    path = tmp_path / "sine48k.wav"
    wavfile.write(str(path), 48000, (sine(440.0, 1.0, 48000) * 32767).astype(np.int16))
    wav = load_audio(path, target_rate=16000)
    # FFT peak-location check: the fundamental must land within one bin
    bin_hz = 16000 / wav.samples.size
    assert abs(fft_peak_hz(wav.samples, 16000) - 440.0) <= bin_hz


def test_opposite_stereo_channels_cancel(tmp_path):
    path = tmp_path / "stereo.wav"
    x = sine(200.0, 0.5, 16000).astype(np.float32)
    wavfile.write(str(path), 16000, np.stack([x, -x], axis=1))
    wav = load_audio(path, target_rate=16000)
    assert np.all(wav.samples == 0.0)


def test_float32_wav_roundtrip(tmp_path):
    path = tmp_path / "f32.wav"
    x = sine(100.0, 0.25, 16000).astype(np.float32)
    wavfile.write(str(path), 16000, x)
    wav = load_audio(path, target_rate=16000)
    np.testing.assert_allclose(wav.samples, x.astype(np.float64), atol=0)


def test_missing_file_raises():
    with pytest.raises(AudioError, match="not found"):
        load_audio("/nonexistent/clip.wav")


def test_zero_length_audio_raises(tmp_path):
    path = tmp_path / "empty.wav"
    wavfile.write(str(path), 16000, np.zeros(0, dtype=np.int16))
    with pytest.raises(AudioError, match="zero-length"):
        load_audio(path)


def test_resample_output_length_exact_ratio():
    wav = Waveform(samples=np.ones(44100), sample_rate=44100)
    out = resample(wav, 16000)
    assert out.samples.size == 16000


def test_resample_preserves_tone_amplitude():
    wav = Waveform(samples=sine(440.0, 1.0, 48000), sample_rate=48000)
    out = resample(wav, 16000)
    # interior samples should track a 440 Hz sine at the original amplitude
    t = np.arange(out.samples.size) / 16000
    reference = 0.5 * np.sin(2 * np.pi * 440.0 * t)
    core = slice(200, -200)
    assert np.max(np.abs(out.samples[core] - reference[core])) < 0.01


def test_pad_or_trim():
    wav = Waveform(samples=np.ones(100), sample_rate=16000)
    assert pad_or_trim(wav, 150).samples.size == 150
    assert np.all(pad_or_trim(wav, 150).samples[100:] == 0.0)
    assert pad_or_trim(wav, 40).samples.size == 40
    assert pad_or_trim(wav, 100) is wav


def test_save_load_roundtrip(tmp_path):
    path = tmp_path / "rt.wav"
    original = Waveform(samples=sine(330.0, 0.3, 16000), sample_rate=16000)
    save_wav(path, original)
    back = load_audio(path, target_rate=16000)
    assert np.max(np.abs(back.samples - original.samples)) < 1e-4  # 16-bit quantization


def test_waveform_invariants():
    with pytest.raises(ValueError):
        Waveform(samples=np.array([]), sample_rate=16000)
    with pytest.raises(ValueError):
        Waveform(samples=np.zeros(10), sample_rate=0)
