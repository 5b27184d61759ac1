"""Short-time Fourier analysis with centered frames and a periodic Hann window."""

from dataclasses import dataclass

import numpy as np

from .types import Waveform


@dataclass(frozen=True)
class StftConfig:
    window_length: int = 400
    hop_length: int = 160
    fft_size: int = 400

    def __post_init__(self):
        if not (0 < self.hop_length <= self.window_length <= self.fft_size):
            raise ValueError(
                f"need 0 < hop ({self.hop_length}) <= window ({self.window_length})"
                f" <= fft ({self.fft_size})"
            )

    @property
    def n_bins(self) -> int:
        return self.fft_size // 2 + 1

    def frame_rate(self, sample_rate: int) -> float:
        return sample_rate / self.hop_length


def hann_window(length: int) -> np.ndarray:
    # Periodic variant, as used by FFT-based analysis front-ends.
    n = np.arange(length, dtype=np.float64)
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * n / length)


def frame_signal(x: np.ndarray, cfg: StftConfig) -> np.ndarray:
    """Centered framing with reflect padding; returns (n_frames, window_length)."""
    if x.size < 1:
        raise ValueError("cannot frame an empty signal")
    pad = cfg.window_length // 2
    if x.size <= pad:
        # reflect padding needs at least pad+1 samples; extend with zeros first
        x = np.pad(x, (0, pad + 1 - x.size), mode="constant")
    padded = np.pad(x, (pad, pad), mode="reflect")
    n_frames = 1 + (padded.size - cfg.window_length) // cfg.hop_length
    idx = (
        np.arange(cfg.window_length)[None, :]
        + cfg.hop_length * np.arange(n_frames)[:, None]
    )
    return padded[idx]


def power_spectrogram(wav: Waveform, cfg: StftConfig, drop_last: bool = True) -> np.ndarray:
    """Magnitude-squared STFT, (n_frames, fft_size // 2 + 1).

    drop_last mirrors the convention of discarding the trailing centered frame
    so a 30 s clip at 16 kHz / hop 160 yields exactly 3000 frames.
    """
    if wav.samples.size < cfg.window_length:
        raise ValueError(
            f"waveform of {wav.samples.size} samples is shorter than one window"
            f" ({cfg.window_length})"
        )
    frames = frame_signal(wav.samples, cfg)
    windowed = frames * hann_window(cfg.window_length)[None, :]
    spec = np.fft.rfft(windowed, n=cfg.fft_size, axis=1)
    power = np.abs(spec) ** 2
    if drop_last and power.shape[0] > 1:
        power = power[:-1]
    return power
