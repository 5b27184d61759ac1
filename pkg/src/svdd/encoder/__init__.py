from .archive import ArchiveError, read_archive, write_archive
from .config import (
    EncoderConfig,
    NAMED_BLOCK_COUNTS,
    SIZE_TABLE,
    layout,
    named_config,
    param_count,
)
from .model import (
    AttentionWeights,
    BlockWeights,
    EncoderWeights,
    Encoding,
    WeightValidationError,
    conv_stem,
    encode,
    gelu,
    layer_norm,
    load_weights,
    multi_head_self_attention,
    pad_or_trim_frames,
    scaled_dot_attention,
    sinusoidal_positions,
    softmax,
    transformer_block,
    weights_from_tensors,
)
from .randinit import random_weight_tensors, random_weights, toy_config

__all__ = [
    "ArchiveError",
    "AttentionWeights",
    "BlockWeights",
    "EncoderConfig",
    "EncoderWeights",
    "Encoding",
    "NAMED_BLOCK_COUNTS",
    "SIZE_TABLE",
    "WeightValidationError",
    "conv_stem",
    "encode",
    "gelu",
    "layer_norm",
    "layout",
    "load_weights",
    "multi_head_self_attention",
    "named_config",
    "pad_or_trim_frames",
    "param_count",
    "random_weight_tensors",
    "random_weights",
    "read_archive",
    "scaled_dot_attention",
    "sinusoidal_positions",
    "softmax",
    "toy_config",
    "transformer_block",
    "weights_from_tensors",
    "write_archive",
]
