"""MFCC and LFCC extraction via orthonormal DCT-II of log filterbank energies."""

import numpy as np

from .filterbank import apply_filterbank, linear_filterbank, mel_filterbank
from .spectral import LOG_FLOOR
from .stft import StftConfig, power_spectrogram
from .types import FeatureKind, FeatureMatrix, Waveform

DEFAULT_N_FILTERS = 40
DEFAULT_N_COEFFS = 20


def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II matrix M with y = M @ x; satisfies M.T @ M = I."""
    k = np.arange(n, dtype=np.float64)[:, None]
    i = np.arange(n, dtype=np.float64)[None, :]
    mat = np.cos(np.pi * k * (2.0 * i + 1.0) / (2.0 * n))
    mat *= np.sqrt(2.0 / n)
    mat[0] *= np.sqrt(0.5)
    return mat


def _cepstra(wav: Waveform, cfg: StftConfig, bank: np.ndarray, n_coeffs: int,
             kind: FeatureKind, source_clip: str) -> FeatureMatrix:
    power = power_spectrogram(wav, cfg)
    energies = apply_filterbank(power, bank)
    log_energies = np.log10(np.maximum(energies, LOG_FLOOR))
    coeffs = log_energies @ dct_matrix(bank.shape[0]).T
    return FeatureMatrix(
        values=coeffs[:, :n_coeffs],
        frame_rate=cfg.frame_rate(wav.sample_rate),
        kind=kind,
        source_clip=source_clip,
    )


def mfcc(wav: Waveform, cfg: StftConfig = StftConfig(), n_mels: int = DEFAULT_N_FILTERS,
         n_coeffs: int = DEFAULT_N_COEFFS, source_clip: str = "") -> FeatureMatrix:
    """Mel-frequency cepstral coefficients, first n_coeffs per frame."""
    if n_coeffs > n_mels:
        raise ValueError(f"n_coeffs ({n_coeffs}) cannot exceed n_mels ({n_mels})")
    bank = mel_filterbank(wav.sample_rate, cfg.fft_size, n_mels)
    return _cepstra(wav, cfg, bank, n_coeffs, FeatureKind.MFCC, source_clip)


def lfcc(wav: Waveform, cfg: StftConfig = StftConfig(), n_filters: int = DEFAULT_N_FILTERS,
         n_coeffs: int = DEFAULT_N_COEFFS, source_clip: str = "") -> FeatureMatrix:
    """Linear-frequency cepstral coefficients, first n_coeffs per frame."""
    if n_coeffs > n_filters:
        raise ValueError(f"n_coeffs ({n_coeffs}) cannot exceed n_filters ({n_filters})")
    bank = linear_filterbank(wav.sample_rate, cfg.fft_size, n_filters)
    return _cepstra(wav, cfg, bank, n_coeffs, FeatureKind.LFCC, source_clip)
