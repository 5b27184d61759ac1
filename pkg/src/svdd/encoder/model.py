"""Transformer encoder inference: conv stem, sinusoidal positions, attention blocks.

The architecture follows the speech-encoder convention the pretrained
checkpoints use: pre-norm residual blocks, exact-erf GELU, positions laid out
as [sin block | cos block], and a stride-2 second conv that halves the frame
count. Everything runs in float32 and is a pure function of its inputs.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from ..features.types import FeatureKind, FeatureMatrix
from .archive import read_archive
from .config import EncoderConfig, layout

LAYERNORM_EPS = 1e-5


class WeightValidationError(Exception):
    pass


@dataclass(frozen=True)
class AttentionWeights:
    q_w: np.ndarray
    q_b: np.ndarray
    k_w: np.ndarray
    k_b: np.ndarray
    v_w: np.ndarray
    v_b: np.ndarray
    out_w: np.ndarray
    out_b: np.ndarray


@dataclass(frozen=True)
class BlockWeights:
    attn_ln_w: np.ndarray
    attn_ln_b: np.ndarray
    attn: AttentionWeights
    mlp_ln_w: np.ndarray
    mlp_ln_b: np.ndarray
    fc1_w: np.ndarray
    fc1_b: np.ndarray
    fc2_w: np.ndarray
    fc2_b: np.ndarray


@dataclass(frozen=True)
class EncoderWeights:
    conv1_w: np.ndarray
    conv1_b: np.ndarray
    conv2_w: np.ndarray
    conv2_b: np.ndarray
    blocks: tuple[BlockWeights, ...]
    ln_post_w: np.ndarray
    ln_post_b: np.ndarray


@dataclass(frozen=True)
class Encoding:
    values: np.ndarray  # T' x d_model float32
    source_clip: str
    model_size: str


def gelu(x: np.ndarray) -> np.ndarray:
    # Exact erf formulation, not the tanh approximation.
    return (0.5 * x * (1.0 + erf(x / np.sqrt(2.0)))).astype(x.dtype, copy=False)


def layer_norm(x: np.ndarray, weight: np.ndarray, bias: np.ndarray) -> np.ndarray:
    mean = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    normed = (x - mean) / np.sqrt(var + LAYERNORM_EPS)
    return normed * weight + bias


def softmax(x: np.ndarray) -> np.ndarray:
    shifted = x - x.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def scaled_dot_attention(q: np.ndarray, k: np.ndarray, v: np.ndarray) -> np.ndarray:
    """softmax(Q K^T / sqrt(d_k)) V; every output row is a convex mix of V rows."""
    q, k, v = (np.asarray(a, dtype=np.float32) for a in (q, k, v))
    if q.ndim != 2 or k.ndim != 2 or v.ndim != 2:
        raise ValueError("Q, K, V must be 2-D matrices")
    if q.shape[1] != k.shape[1]:
        raise ValueError(f"Q has d_k={q.shape[1]} but K has d_k={k.shape[1]}")
    if k.shape[0] != v.shape[0]:
        raise ValueError(f"K has {k.shape[0]} rows but V has {v.shape[0]}")
    scores = (q @ k.T) / np.sqrt(np.float32(q.shape[1]))
    return softmax(scores) @ v


def multi_head_self_attention(x: np.ndarray, w: AttentionWeights, n_heads: int) -> np.ndarray:
    """Per-head scaled dot-product attention over linear Q/K/V projections."""
    x = np.asarray(x, dtype=np.float32)
    d_model = x.shape[1]
    if d_model % n_heads != 0:
        raise ValueError(f"d_model ({d_model}) not divisible by n_heads ({n_heads})")
    d_head = d_model // n_heads

    q = x @ w.q_w.T + w.q_b
    k = x @ w.k_w.T + w.k_b
    v = x @ w.v_w.T + w.v_b

    outputs = np.empty_like(x)
    for h in range(n_heads):
        sl = slice(h * d_head, (h + 1) * d_head)
        outputs[:, sl] = scaled_dot_attention(q[:, sl], k[:, sl], v[:, sl])
    return outputs @ w.out_w.T + w.out_b


def feed_forward(x: np.ndarray, bw: BlockWeights) -> np.ndarray:
    return gelu(x @ bw.fc1_w.T + bw.fc1_b) @ bw.fc2_w.T + bw.fc2_b


def transformer_block(x: np.ndarray, bw: BlockWeights, n_heads: int) -> np.ndarray:
    """Pre-norm residual block: x + Attn(LN(x)), then x + FF(LN(x))."""
    x = np.asarray(x, dtype=np.float32)
    x = x + multi_head_self_attention(layer_norm(x, bw.attn_ln_w, bw.attn_ln_b), bw.attn, n_heads)
    x = x + feed_forward(layer_norm(x, bw.mlp_ln_w, bw.mlp_ln_b), bw)
    if not np.all(np.isfinite(x)):
        raise FloatingPointError("non-finite activations in transformer block (corrupted weights?)")
    return x


def _conv1d(x: np.ndarray, weight: np.ndarray, bias: np.ndarray, stride: int) -> np.ndarray:
    """Same-padded 1-D convolution; x is (C_in, T), weight (C_out, C_in, 3)."""
    c_in, t = x.shape
    padded = np.pad(x, ((0, 0), (1, 1)), mode="constant")
    t_out = (t + 2 - 3) // stride + 1
    # patches[c, tap, j] = padded[c, stride*j + tap]
    idx = np.arange(3)[:, None] + stride * np.arange(t_out)[None, :]
    patches = padded[:, idx].reshape(c_in * 3, t_out)
    out = weight.reshape(weight.shape[0], c_in * 3) @ patches + bias[:, None]
    return out.astype(np.float32)


def conv_stem(mel: np.ndarray, weights: EncoderWeights) -> np.ndarray:
    """Two same-padded convolutions (stride 1 then 2) with GELU; (T, n_mels) -> (ceil(T/2), d)."""
    mel = np.asarray(mel, dtype=np.float32)
    if mel.ndim != 2 or mel.shape[1] != weights.conv1_w.shape[1]:
        raise ValueError(
            f"mel input must be (T, {weights.conv1_w.shape[1]}), got {mel.shape}"
        )
    x = gelu(_conv1d(mel.T, weights.conv1_w, weights.conv1_b, stride=1))
    x = gelu(_conv1d(x, weights.conv2_w, weights.conv2_b, stride=2))
    return x.T


def sinusoidal_positions(n_frames: int, d_model: int) -> np.ndarray:
    """Position table [sin block | cos block]; wavelengths geometric from 2*pi to 10000*2*pi.

    Pair k of row t is (sin(t * w_k), cos(t * w_k)) at columns (k, d/2 + k).
    """
    if d_model % 2 != 0:
        raise ValueError(f"d_model must be even, got {d_model}")
    half = d_model // 2
    if half > 1:
        inv_timescales = np.exp(-np.log(10000.0) / (half - 1) * np.arange(half))
    else:
        inv_timescales = np.ones(1)
    args = np.arange(n_frames)[:, None] * inv_timescales[None, :]
    return np.concatenate([np.sin(args), np.cos(args)], axis=1).astype(np.float32)


def pad_or_trim_frames(mel: np.ndarray, n_frames: int) -> np.ndarray:
    """Fix the frame count; padding rows take the matrix minimum (the log floor)."""
    if mel.shape[0] == n_frames:
        return mel
    if mel.shape[0] > n_frames:
        return mel[:n_frames]
    fill = np.full((n_frames - mel.shape[0], mel.shape[1]), mel.min(), dtype=mel.dtype)
    return np.concatenate([mel, fill], axis=0)


def encode(mel: FeatureMatrix, cfg: EncoderConfig, weights: EncoderWeights,
           source_clip: str | None = None) -> Encoding:
    """Full encoder pass: stem -> +positions -> blocks -> final LayerNorm."""
    if mel.kind is not FeatureKind.LOGMEL:
        raise ValueError(f"encoder input must be LogMel, got {mel.kind.value}")
    frames = pad_or_trim_frames(np.asarray(mel.values, dtype=np.float32), cfg.max_frames)
    x = conv_stem(frames, weights)
    x = x + sinusoidal_positions(x.shape[0], cfg.d_model)
    for bw in weights.blocks:
        x = transformer_block(x, bw, cfg.n_heads)
    x = layer_norm(x, weights.ln_post_w, weights.ln_post_b).astype(np.float32)
    if not np.all(np.isfinite(x)):
        raise FloatingPointError("non-finite encoder output")
    expected = (cfg.max_frames + 1) // 2
    assert x.shape == (expected, cfg.d_model)
    return Encoding(values=x, source_clip=source_clip if source_clip is not None else mel.source_clip,
                    model_size=cfg.size_name)


def weights_from_tensors(tensors: dict[str, np.ndarray], cfg: EncoderConfig) -> EncoderWeights:
    """Validate a tensor map against the layout and assemble weight structs."""
    expected = layout(cfg)
    problems = []
    for name, shape in expected.items():
        if name not in tensors:
            problems.append(f"missing tensor {name!r}")
        elif tuple(tensors[name].shape) != shape:
            problems.append(
                f"shape mismatch for {name!r}: expected {shape}, got {tuple(tensors[name].shape)}"
            )
        elif not np.all(np.isfinite(tensors[name])):
            problems.append(f"non-finite values in tensor {name!r}")
    for name in tensors:
        if name not in expected:
            problems.append(f"unexpected tensor {name!r}")
    if problems:
        raise WeightValidationError("; ".join(problems))

    t = {name: np.asarray(tensors[name], dtype=np.float32) for name in expected}
    blocks = []
    for i in range(cfg.n_blocks):
        p = f"blocks.{i}."
        attn = AttentionWeights(
            q_w=t[p + "attn.q.weight"], q_b=t[p + "attn.q.bias"],
            k_w=t[p + "attn.k.weight"], k_b=t[p + "attn.k.bias"],
            v_w=t[p + "attn.v.weight"], v_b=t[p + "attn.v.bias"],
            out_w=t[p + "attn.out.weight"], out_b=t[p + "attn.out.bias"],
        )
        blocks.append(BlockWeights(
            attn_ln_w=t[p + "attn_ln.weight"], attn_ln_b=t[p + "attn_ln.bias"],
            attn=attn,
            mlp_ln_w=t[p + "mlp_ln.weight"], mlp_ln_b=t[p + "mlp_ln.bias"],
            fc1_w=t[p + "mlp.fc1.weight"], fc1_b=t[p + "mlp.fc1.bias"],
            fc2_w=t[p + "mlp.fc2.weight"], fc2_b=t[p + "mlp.fc2.bias"],
        ))
    return EncoderWeights(
        conv1_w=t["conv1.weight"], conv1_b=t["conv1.bias"],
        conv2_w=t["conv2.weight"], conv2_b=t["conv2.bias"],
        blocks=tuple(blocks),
        ln_post_w=t["ln_post.weight"], ln_post_b=t["ln_post.bias"],
    )


def load_weights(archive_path, cfg: EncoderConfig) -> EncoderWeights:
    """Read a portable tensor archive and validate it for cfg."""
    tensors = read_archive(archive_path)
    return weights_from_tensors(tensors, cfg)
