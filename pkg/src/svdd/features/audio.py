"""WAV loading, channel downmix and band-limited resampling."""

import numpy as np
from scipy.io import wavfile

from .types import Waveform


class AudioError(Exception):
    """Raised for unreadable or unsupported audio input."""


# Windowed-sinc interpolator settings: 64 taps, Kaiser beta 8.555 (~80 dB
# stopband). Fixed here so resampled output is reproducible bit-for-bit.
RESAMPLE_TAPS = 64
RESAMPLE_KAISER_BETA = 8.555


def load_audio(path, target_rate: int = 16000) -> Waveform:
    """Read a PCM WAV file as a mono waveform at target_rate.

    Accepts 16-bit integer or 32-bit float RIFF files (plus other integer
    widths scipy understands). Stereo channels are averaged to mono and the
    result is resampled with the windowed-sinc interpolator.
    """
    try:
        rate, data = wavfile.read(str(path))
    except FileNotFoundError:
        raise AudioError(f"audio file not found: {path}")
    except Exception as exc:
        raise AudioError(f"unreadable WAV file {path}: {exc}")

    if data.size == 0:
        raise AudioError(f"zero-length audio: {path}")

    samples = _to_float(data)
    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    elif samples.ndim != 1:
        raise AudioError(f"unsupported channel layout with shape {data.shape}: {path}")

    wav = Waveform(samples=samples, sample_rate=int(rate))
    if int(rate) != int(target_rate):
        wav = resample(wav, int(target_rate))
    return wav


def save_wav(path, wav: Waveform) -> None:
    """Write a waveform as 16-bit PCM."""
    clipped = np.clip(wav.samples, -1.0, 1.0)
    pcm = np.round(clipped * 32767.0).astype(np.int16)
    wavfile.write(str(path), wav.sample_rate, pcm)


def _to_float(data: np.ndarray) -> np.ndarray:
    if data.dtype == np.int16:
        return data.astype(np.float64) / 32768.0
    if data.dtype == np.int32:
        return data.astype(np.float64) / 2147483648.0
    if data.dtype == np.uint8:
        return (data.astype(np.float64) - 128.0) / 128.0
    if data.dtype in (np.float32, np.float64):
        return data.astype(np.float64)
    raise AudioError(f"unsupported WAV sample encoding: {data.dtype}")


def resample(wav: Waveform, target_rate: int) -> Waveform:
    """Band-limited resampling via a 64-tap Kaiser-windowed sinc."""
    if target_rate <= 0:
        raise ValueError(f"target_rate must be positive, got {target_rate}")
    if target_rate == wav.sample_rate:
        return wav

    x = wav.samples
    ratio = target_rate / wav.sample_rate
    n_out = int(round(x.size * ratio))
    if n_out < 1:
        raise AudioError("resampled output would be empty")

    # Anti-aliasing cutoff: full band when upsampling, scaled when downsampling.
    cutoff = min(1.0, ratio)
    half = RESAMPLE_TAPS // 2

    # Output sample m sits at time t = m / ratio in input coordinates; gather
    # the 64 nearest input samples around each t.
    t = np.arange(n_out, dtype=np.float64) / ratio
    base = np.floor(t).astype(np.int64)
    offsets = np.arange(-half + 1, half + 1, dtype=np.int64)
    idx = base[:, None] + offsets[None, :]

    frac = t[:, None] - idx
    taps = cutoff * np.sinc(cutoff * frac) * _kaiser(frac / half)

    padded = np.pad(x, (half, half), mode="constant")
    gathered = padded[np.clip(idx + half, 0, padded.size - 1)]
    out = np.einsum("ij,ij->i", gathered, taps)
    return Waveform(samples=out, sample_rate=target_rate)


def _kaiser(u: np.ndarray) -> np.ndarray:
    # Kaiser window evaluated at normalized offsets u in [-1, 1], zero outside.
    from scipy.special import i0

    inside = np.abs(u) <= 1.0
    vals = np.zeros_like(u)
    vals[inside] = i0(RESAMPLE_KAISER_BETA * np.sqrt(1.0 - u[inside] ** 2)) / i0(RESAMPLE_KAISER_BETA)
    return vals


def pad_or_trim(wav: Waveform, n_samples: int) -> Waveform:
    """Zero-pad or truncate to an exact sample count."""
    x = wav.samples
    if x.size == n_samples:
        return wav
    if x.size < n_samples:
        x = np.pad(x, (0, n_samples - x.size), mode="constant")
    else:
        x = x[:n_samples]
    return Waveform(samples=x, sample_rate=wav.sample_rate)
