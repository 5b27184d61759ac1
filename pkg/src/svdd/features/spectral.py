"""Log-mel spectrograms in the convention the encoder front-end expects."""

import numpy as np

from .filterbank import apply_filterbank, mel_filterbank
from .stft import StftConfig, power_spectrogram
from .types import FeatureKind, FeatureMatrix, Waveform

ENCODER_SAMPLE_RATE = 16000
ENCODER_STFT = StftConfig(window_length=400, hop_length=160, fft_size=400)
ENCODER_N_MELS = 80

LOG_FLOOR = 1e-10
DYNAMIC_RANGE_DB10 = 8.0  # clamp at per-clip max minus 8 log10 units


def log_mel_spectrogram(wav: Waveform, cfg: StftConfig = ENCODER_STFT,
                        n_mels: int = ENCODER_N_MELS, source_clip: str = "") -> FeatureMatrix:
    """Mel-scaled log spectrogram normalized per clip.

    Pipeline: magnitude-squared STFT -> mel filterbank -> log10 with floor ->
    clamp at (max - 8.0) -> (x + 4.0) / 4.0. With the default 16 kHz config a
    30 s clip produces exactly 3000 frames.
    """
    if wav.sample_rate != ENCODER_SAMPLE_RATE:
        raise ValueError(f"expected {ENCODER_SAMPLE_RATE} Hz input, got {wav.sample_rate}")
    power = power_spectrogram(wav, cfg)
    bank = mel_filterbank(wav.sample_rate, cfg.fft_size, n_mels)
    mel = apply_filterbank(power, bank)

    log_spec = np.log10(np.maximum(mel, LOG_FLOOR))
    log_spec = np.maximum(log_spec, log_spec.max() - DYNAMIC_RANGE_DB10)
    log_spec = (log_spec + 4.0) / 4.0
    return FeatureMatrix(
        values=log_spec,
        frame_rate=cfg.frame_rate(wav.sample_rate),
        kind=FeatureKind.LOGMEL,
        source_clip=source_clip,
    )
