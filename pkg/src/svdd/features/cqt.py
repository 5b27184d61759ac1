"""Constant-Q transform and constant-Q cepstral coefficients."""

import numpy as np

from .cepstral import dct_matrix
from .spectral import LOG_FLOOR
from .stft import hann_window
from .types import FeatureKind, FeatureMatrix, Waveform

DEFAULT_BINS_PER_OCTAVE = 24
DEFAULT_FMIN = 31.25
DEFAULT_HOP = 256
DEFAULT_N_COEFFS = 20

_CHUNK_FRAMES = 256


def q_factor(bins_per_octave: int) -> float:
    return 1.0 / (2.0 ** (1.0 / bins_per_octave) - 1.0)


def cqt_frequencies(bins_per_octave: int, fmin: float, fmax: float) -> np.ndarray:
    """Geometrically spaced center frequencies fmin * 2^(k/B) up to fmax."""
    n_bins = int(np.floor(bins_per_octave * np.log2(fmax / fmin))) + 1
    k = np.arange(n_bins, dtype=np.float64)
    return fmin * 2.0 ** (k / bins_per_octave)


def cqt_magnitude(wav: Waveform, bins_per_octave: int = DEFAULT_BINS_PER_OCTAVE,
                  fmin: float = DEFAULT_FMIN, fmax: float | None = None,
                  hop: int = DEFAULT_HOP) -> np.ndarray:
    """Constant-Q magnitude spectrogram, shape (n_frames, n_bins).

    Each bin is a Hann-windowed complex correlation centered on the frame
    position; window length scales as Q * sr / f_k so all bins share the same
    quality factor.
    """
    nyquist = wav.sample_rate / 2.0
    if fmax is None:
        fmax = nyquist
    if not (0.0 < fmin < fmax <= nyquist):
        raise ValueError(f"invalid frequency range: fmin={fmin}, fmax={fmax}, nyquist={nyquist}")

    x = wav.samples
    freqs = cqt_frequencies(bins_per_octave, fmin, fmax)
    q = q_factor(bins_per_octave)
    positions = np.arange(0, x.size, hop, dtype=np.int64)
    out = np.zeros((positions.size, freqs.size), dtype=np.float64)

    max_len = int(round(q * wav.sample_rate / freqs[0]))
    padded = np.pad(x, (max_len, max_len), mode="constant")

    for k, fk in enumerate(freqs):
        n_k = max(int(round(q * wav.sample_rate / fk)), 4)
        window = hann_window(n_k)
        n = np.arange(n_k, dtype=np.float64) - n_k // 2
        kernel = window * np.exp(-2j * np.pi * fk * n / wav.sample_rate)
        kernel /= window.sum()

        starts = positions - n_k // 2 + max_len
        for c0 in range(0, positions.size, _CHUNK_FRAMES):
            chunk = starts[c0:c0 + _CHUNK_FRAMES]
            idx = chunk[:, None] + np.arange(n_k)[None, :]
            frames = padded[idx]
            out[c0:c0 + _CHUNK_FRAMES, k] = 2.0 * np.abs(frames @ kernel)
    return out


def cqcc(wav: Waveform, bins_per_octave: int = DEFAULT_BINS_PER_OCTAVE,
         fmin: float = DEFAULT_FMIN, fmax: float | None = None,
         n_coeffs: int = DEFAULT_N_COEFFS, hop: int = DEFAULT_HOP,
         source_clip: str = "") -> FeatureMatrix:
    """Constant-Q cepstral coefficients.

    Log constant-Q magnitudes are resampled from the geometric frequency axis
    onto a uniform linear grid (density 2x the bin count), then reduced by an
    orthonormal DCT-II to the first n_coeffs coefficients.
    """
    mag = cqt_magnitude(wav, bins_per_octave, fmin, fmax, hop)
    log_mag = np.log10(np.maximum(mag, LOG_FLOOR))

    freqs = cqt_frequencies(bins_per_octave, fmin, fmax if fmax is not None else wav.sample_rate / 2.0)
    n_uniform = 2 * freqs.size
    uniform = np.linspace(freqs[0], freqs[-1], n_uniform)
    resampled = np.empty((log_mag.shape[0], n_uniform), dtype=np.float64)
    for t in range(log_mag.shape[0]):
        resampled[t] = np.interp(uniform, freqs, log_mag[t])

    coeffs = resampled @ dct_matrix(n_uniform).T
    return FeatureMatrix(
        values=coeffs[:, :n_coeffs],
        frame_rate=wav.sample_rate / hop,
        kind=FeatureKind.CQCC,
        source_clip=source_clip,
    )
