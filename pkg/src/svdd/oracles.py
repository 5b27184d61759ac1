"""Naive reference implementations used to cross-check the fast paths.

Everything here is written as straight-line loops in float64, independent of
the vectorized production code. Slow on purpose; only for verification.
"""

import numpy as np

from .encoder.config import EncoderConfig
from .encoder.model import EncoderWeights, LAYERNORM_EPS


def softmax_attention(q, k, v) -> np.ndarray:
    """Two-loop softmax(Q K^T / sqrt(d_k)) V."""
    q = np.asarray(q, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    t_q, d_k = q.shape
    t_k, d_v = v.shape
    out = np.zeros((t_q, d_v))
    for i in range(t_q):
        scores = np.zeros(t_k)
        for j in range(t_k):
            scores[j] = float(np.dot(q[i], k[j])) / np.sqrt(d_k)
        scores -= scores.max()
        weights = np.exp(scores)
        weights /= weights.sum()
        for j in range(t_k):
            out[i] += weights[j] * v[j]
    return out


def multi_head_attention(x, w, n_heads: int) -> np.ndarray:
    """Explicit head loop over the same projection weights the fast path uses."""
    x = np.asarray(x, dtype=np.float64)
    d_model = x.shape[1]
    d_head = d_model // n_heads
    q = x @ np.asarray(w.q_w, dtype=np.float64).T + np.asarray(w.q_b, dtype=np.float64)
    k = x @ np.asarray(w.k_w, dtype=np.float64).T + np.asarray(w.k_b, dtype=np.float64)
    v = x @ np.asarray(w.v_w, dtype=np.float64).T + np.asarray(w.v_b, dtype=np.float64)
    concat = np.zeros_like(x)
    for h in range(n_heads):
        sl = slice(h * d_head, (h + 1) * d_head)
        concat[:, sl] = softmax_attention(q[:, sl], k[:, sl], v[:, sl])
    return concat @ np.asarray(w.out_w, dtype=np.float64).T + np.asarray(w.out_b, dtype=np.float64)


def layer_norm(x, weight, bias) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    for i in range(x.shape[0]):
        row = x[i]
        mean = row.mean()
        var = ((row - mean) ** 2).mean()
        out[i] = (row - mean) / np.sqrt(var + LAYERNORM_EPS) * np.asarray(weight, dtype=np.float64) \
            + np.asarray(bias, dtype=np.float64)
    return out


def gelu(x) -> np.ndarray:
    from scipy.special import erf

    x = np.asarray(x, dtype=np.float64)
    return 0.5 * x * (1.0 + erf(x / np.sqrt(2.0)))


def transformer_block(x, bw, n_heads: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    x = x + multi_head_attention(layer_norm(x, bw.attn_ln_w, bw.attn_ln_b), bw.attn, n_heads)
    hidden = gelu(layer_norm(x, bw.mlp_ln_w, bw.mlp_ln_b) @ np.asarray(bw.fc1_w, dtype=np.float64).T
                  + np.asarray(bw.fc1_b, dtype=np.float64))
    return x + hidden @ np.asarray(bw.fc2_w, dtype=np.float64).T + np.asarray(bw.fc2_b, dtype=np.float64)


def conv1d(x, weight, bias, stride: int) -> np.ndarray:
    """Sliding-window convolution with explicit loops; x (C_in, T), same padding."""
    x = np.asarray(x, dtype=np.float64)
    weight = np.asarray(weight, dtype=np.float64)
    bias = np.asarray(bias, dtype=np.float64)
    c_out, c_in, k = weight.shape
    t = x.shape[1]
    padded = np.pad(x, ((0, 0), (1, 1)))
    t_out = (t + 2 - k) // stride + 1
    out = np.zeros((c_out, t_out))
    for o in range(c_out):
        for j in range(t_out):
            acc = bias[o]
            for c in range(c_in):
                for tap in range(k):
                    acc += weight[o, c, tap] * padded[c, stride * j + tap]
            out[o, j] = acc
    return out


def conv_stem(mel, weights: EncoderWeights) -> np.ndarray:
    x = gelu(conv1d(np.asarray(mel, dtype=np.float64).T, weights.conv1_w, weights.conv1_b, 1))
    x = gelu(conv1d(x, weights.conv2_w, weights.conv2_b, 2))
    return x.T


def sinusoidal_positions(n_frames: int, d_model: int) -> np.ndarray:
    half = d_model // 2
    out = np.zeros((n_frames, d_model))
    for t in range(n_frames):
        for i in range(half):
            if half > 1:
                timescale = 10000.0 ** (i / (half - 1))
            else:
                timescale = 1.0
            out[t, i] = np.sin(t / timescale)
            out[t, half + i] = np.cos(t / timescale)
    return out


def encode(mel, cfg: EncoderConfig, weights: EncoderWeights) -> np.ndarray:
    mel = np.asarray(mel, dtype=np.float64)
    if mel.shape[0] > cfg.max_frames:
        mel = mel[: cfg.max_frames]
    elif mel.shape[0] < cfg.max_frames:
        fill = np.full((cfg.max_frames - mel.shape[0], mel.shape[1]), mel.min())
        mel = np.concatenate([mel, fill], axis=0)
    x = conv_stem(mel, weights)
    x = x + sinusoidal_positions(x.shape[0], cfg.d_model)
    for bw in weights.blocks:
        x = transformer_block(x, bw, cfg.n_heads)
    return layer_norm(x, weights.ln_post_w, weights.ln_post_b)


def filterbank_direct(power_frame, bank) -> np.ndarray:
    """Explicit weighted sum over FFT bins for each filter."""
    power_frame = np.asarray(power_frame, dtype=np.float64)
    bank = np.asarray(bank, dtype=np.float64)
    out = np.zeros(bank.shape[0])
    for f in range(bank.shape[0]):
        acc = 0.0
        for b in range(bank.shape[1]):
            acc += bank[f, b] * power_frame[b]
        out[f] = acc
    return out


def eer_threshold_sweep(bonafide_scores, deepfake_scores) -> tuple[float, float]:
    """Exhaustive per-threshold FAR/FRR counting with the same crossing rule.

    Thresholds cover below-minimum, every distinct score, every midpoint
    between consecutive distinct scores, and above-maximum, so the step
    functions are sampled everywhere they can change.
    """
    bona = [float(s) for s in bonafide_scores]
    deep = [float(s) for s in deepfake_scores]
    distinct = sorted(set(bona + deep))
    thresholds = [distinct[0] - 1.0]
    for i, s in enumerate(distinct):
        thresholds.append(s)
        if i + 1 < len(distinct):
            thresholds.append(0.5 * (s + distinct[i + 1]))
    thresholds.append(distinct[-1] + 1.0)

    points = []
    for t in thresholds:
        far = sum(1 for s in deep if s >= t) / len(deep)
        frr = sum(1 for s in bona if s < t) / len(bona)
        points.append((t, far, frr))

    for t, far, frr in points:
        if far == frr:
            return far, t
    for (t0, far0, frr0), (t1, far1, frr1) in zip(points, points[1:]):
        d0, d1 = far0 - frr0, far1 - frr1
        if d0 > 0 and d1 < 0:
            frac = d0 / (d0 - d1)
            return far0 + frac * (far1 - far0), t0 + frac * (t1 - t0)
    t, far, frr = points[-1]
    return far, t


def adam_single_step(w0: float, grad: float, lr: float = 0.001, beta1: float = 0.9,
                     beta2: float = 0.999, eps: float = 1e-8) -> float:
    """Hand-stepped first Adam update with bias correction."""
    m = (1.0 - beta1) * grad
    v = (1.0 - beta2) * grad * grad
    m_hat = m / (1.0 - beta1)
    v_hat = v / (1.0 - beta2)
    return w0 - lr * m_hat / (np.sqrt(v_hat) + eps)
