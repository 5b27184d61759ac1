"""Test-local reference implementations, separate from the package oracles."""

import numpy as np


def sine(freq: float, seconds: float, rate: int, amp: float = 0.5) -> np.ndarray:
    t = np.arange(int(seconds * rate)) / rate
    return amp * np.sin(2.0 * np.pi * freq * t)


def fft_peak_hz(samples: np.ndarray, rate: int) -> float:
    """Dominant frequency via a plain periodogram."""
    spectrum = np.abs(np.fft.rfft(samples * np.hanning(samples.size)))
    freqs = np.fft.rfftfreq(samples.size, d=1.0 / rate)
    return float(freqs[np.argmax(spectrum)])


def naive_conv2d(x, weight, bias, padding: int):
    """Nested-loop 2-D convolution; x (C_in, H, W), weight (C_out, C_in, K, K)."""
    c_out, c_in, k, _ = weight.shape
    h, w = x.shape[1], x.shape[2]
    padded = np.pad(x, ((0, 0), (padding, padding), (padding, padding)))
    out = np.zeros((c_out, h, w))
    for o in range(c_out):
        for i in range(h):
            for j in range(w):
                acc = bias[o]
                for c in range(c_in):
                    for di in range(k):
                        for dj in range(k):
                            acc += weight[o, c, di, dj] * padded[c, i + di, j + dj]
                out[o, i, j] = acc
    return out


def naive_maxpool2(x):
    """2x2 max pooling with stride 2 (floor), x (C, H, W)."""
    c, h, w = x.shape
    out = np.zeros((c, h // 2, w // 2))
    for ch in range(c):
        for i in range(h // 2):
            for j in range(w // 2):
                out[ch, i, j] = x[ch, 2 * i:2 * i + 2, 2 * j:2 * j + 2].max()
    return out


def naive_cnn_forward(x, conv1_w, conv1_b, conv2_w, conv2_b, fc_w, fc_b):
    """The tiny CNN head recomputed with loops: conv5/relu/pool twice, then FC."""
    a = np.maximum(naive_conv2d(x, conv1_w, conv1_b, padding=2), 0.0)
    a = naive_maxpool2(a)
    a = np.maximum(naive_conv2d(a, conv2_w, conv2_b, padding=2), 0.0)
    a = naive_maxpool2(a)
    return fc_w @ a.reshape(-1) + fc_b


def naive_cqt_bin(samples, rate, freq, q):
    """Single constant-Q bin magnitudes by direct windowed DFT at each hop."""
    n_k = max(int(round(q * rate / freq)), 4)
    n = np.arange(n_k)
    window = 0.5 - 0.5 * np.cos(2.0 * np.pi * n / n_k)
    centered = n - n_k // 2
    def at(position: int) -> float:
        acc = 0.0 + 0.0j
        for tap in range(n_k):
            src = position - n_k // 2 + tap
            if 0 <= src < samples.size:
                acc += window[tap] * samples[src] * np.exp(-2j * np.pi * freq * centered[tap] / rate)
        return 2.0 * abs(acc) / window.sum()
    return at
