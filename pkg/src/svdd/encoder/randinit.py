"""Seeded random encoder weights for toy pipelines and self-tests."""

import numpy as np

from .config import EncoderConfig, layout
from .model import EncoderWeights, weights_from_tensors


def toy_config(n_blocks: int = 2, d_model: int = 8, n_heads: int = 2,
               d_ff: int = 32, n_mels: int = 80, max_frames: int = 3000) -> EncoderConfig:
    return EncoderConfig(size_name=f"toy{n_blocks}x{d_model}", n_blocks=n_blocks,
                         d_model=d_model, n_heads=n_heads, d_ff=d_ff,
                         n_mels=n_mels, max_frames=max_frames)


def random_weight_tensors(cfg: EncoderConfig, seed: int) -> dict[str, np.ndarray]:
    """Gaussian tensors scaled by fan-in; LayerNorm gains start at 1, biases at 0."""
    rng = np.random.default_rng(seed)
    tensors = {}
    for name, shape in layout(cfg).items():
        if name.endswith("ln.weight") or name.endswith("ln_post.weight"):
            tensors[name] = np.ones(shape, dtype=np.float32)
        elif name.endswith(".bias"):
            tensors[name] = np.zeros(shape, dtype=np.float32)
        else:
            fan_in = int(np.prod(shape[1:])) if len(shape) > 1 else shape[0]
            scale = 1.0 / np.sqrt(max(fan_in, 1))
            tensors[name] = rng.normal(0.0, scale, size=shape).astype(np.float32)
    return tensors


def random_weights(cfg: EncoderConfig, seed: int) -> EncoderWeights:
    return weights_from_tensors(random_weight_tensors(cfg, seed), cfg)
