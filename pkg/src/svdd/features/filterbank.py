"""Triangular filterbanks on mel and linear frequency scales."""

import numpy as np

# Slaney-style mel scale: linear below 1 kHz, logarithmic above.
_MEL_BREAK_HZ = 1000.0
_MEL_HZ_PER_MEL = 200.0 / 3.0
_MEL_LOGSTEP = np.log(6.4) / 27.0
_MEL_BREAK = _MEL_BREAK_HZ / _MEL_HZ_PER_MEL


def hz_to_mel(f):
    f = np.asarray(f, dtype=np.float64)
    mel = f / _MEL_HZ_PER_MEL
    above = f >= _MEL_BREAK_HZ
    if np.any(above):
        mel = np.where(above, _MEL_BREAK + np.log(np.maximum(f, _MEL_BREAK_HZ) / _MEL_BREAK_HZ) / _MEL_LOGSTEP, mel)
    return mel


def mel_to_hz(m):
    m = np.asarray(m, dtype=np.float64)
    f = m * _MEL_HZ_PER_MEL
    above = m >= _MEL_BREAK
    if np.any(above):
        f = np.where(above, _MEL_BREAK_HZ * np.exp(_MEL_LOGSTEP * (np.maximum(m, _MEL_BREAK) - _MEL_BREAK)), f)
    return f


def _triangles(centers_hz: np.ndarray, bin_freqs: np.ndarray) -> np.ndarray:
    """Triangular weights for n filters given n+2 edge frequencies."""
    n_filters = centers_hz.size - 2
    weights = np.zeros((n_filters, bin_freqs.size), dtype=np.float64)
    for i in range(n_filters):
        lo, mid, hi = centers_hz[i], centers_hz[i + 1], centers_hz[i + 2]
        rising = (bin_freqs - lo) / max(mid - lo, 1e-12)
        falling = (hi - bin_freqs) / max(hi - mid, 1e-12)
        weights[i] = np.maximum(0.0, np.minimum(rising, falling))
    return weights


def mel_filterbank(sample_rate: int, fft_size: int, n_mels: int,
                   fmin: float = 0.0, fmax: float | None = None) -> np.ndarray:
    """Slaney-normalized mel filterbank, shape (n_mels, fft_size//2 + 1)."""
    if fmax is None:
        fmax = sample_rate / 2.0
    bin_freqs = np.linspace(0.0, sample_rate / 2.0, fft_size // 2 + 1)
    mel_edges = np.linspace(hz_to_mel(fmin), hz_to_mel(fmax), n_mels + 2)
    hz_edges = mel_to_hz(mel_edges)
    weights = _triangles(hz_edges, bin_freqs)
    # Area normalization: each filter integrates to ~constant energy per band.
    enorm = 2.0 / (hz_edges[2:] - hz_edges[:-2])
    return weights * enorm[:, None]


def linear_filterbank(sample_rate: int, fft_size: int, n_filters: int) -> np.ndarray:
    """Unnormalized triangular filters spaced linearly from 0 to Nyquist."""
    bin_freqs = np.linspace(0.0, sample_rate / 2.0, fft_size // 2 + 1)
    hz_edges = np.linspace(0.0, sample_rate / 2.0, n_filters + 2)
    return _triangles(hz_edges, bin_freqs)


def linear_center_frequencies(sample_rate: int, n_filters: int) -> np.ndarray:
    return np.linspace(0.0, sample_rate / 2.0, n_filters + 2)[1:-1]


def apply_filterbank(power: np.ndarray, bank: np.ndarray) -> np.ndarray:
    """Filter energies per frame: (T, n_bins) @ bank.T -> (T, n_filters)."""
    if power.shape[1] != bank.shape[1]:
        raise ValueError(f"spectrum has {power.shape[1]} bins, filterbank expects {bank.shape[1]}")
    return power @ bank.T
