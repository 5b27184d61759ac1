"""Encoder architecture configuration and the per-size tensor layout."""

from dataclasses import dataclass

SIZE_TABLE = {
    "tiny": dict(n_blocks=4, d_model=384, n_heads=6),
    "base": dict(n_blocks=6, d_model=512, n_heads=8),
    "small": dict(n_blocks=12, d_model=768, n_heads=12),
    "medium": dict(n_blocks=24, d_model=1024, n_heads=16),
}

NAMED_BLOCK_COUNTS = {4, 6, 12, 24}


@dataclass(frozen=True)
class EncoderConfig:
    size_name: str
    n_blocks: int
    d_model: int
    n_heads: int
    d_ff: int
    n_mels: int = 80
    max_frames: int = 3000  # 30 s of mel frames at 10 ms hop

    def __post_init__(self):
        if self.d_model % self.n_heads != 0:
            raise ValueError(f"d_model ({self.d_model}) must be divisible by n_heads ({self.n_heads})")
        if self.size_name in SIZE_TABLE and self.n_blocks not in NAMED_BLOCK_COUNTS:
            raise ValueError(f"named size {self.size_name} requires block count in {sorted(NAMED_BLOCK_COUNTS)}")

    @property
    def d_head(self) -> int:
        return self.d_model // self.n_heads

    @property
    def out_frames(self) -> int:
        # The second stem conv has stride 2.
        return (self.max_frames + 1) // 2


def named_config(size_name: str) -> EncoderConfig:
    key = size_name.lower()
    if key not in SIZE_TABLE:
        raise ValueError(f"unknown encoder size {size_name!r}; expected one of {sorted(SIZE_TABLE)}")
    dims = SIZE_TABLE[key]
    return EncoderConfig(size_name=key, d_ff=4 * dims["d_model"], **dims)


def layout(cfg: EncoderConfig) -> dict[str, tuple[int, ...]]:
    """Expected tensor name -> shape map for one configuration.

    Linear weights are (out, in) with y = x @ W.T + b; conv kernels are
    (out_channels, in_channels, kernel).
    """
    d, f = cfg.d_model, cfg.d_ff
    shapes: dict[str, tuple[int, ...]] = {
        "conv1.weight": (d, cfg.n_mels, 3),
        "conv1.bias": (d,),
        "conv2.weight": (d, d, 3),
        "conv2.bias": (d,),
        "ln_post.weight": (d,),
        "ln_post.bias": (d,),
    }
    for i in range(cfg.n_blocks):
        p = f"blocks.{i}."
        shapes[p + "attn_ln.weight"] = (d,)
        shapes[p + "attn_ln.bias"] = (d,)
        for proj in ("q", "k", "v", "out"):
            shapes[p + f"attn.{proj}.weight"] = (d, d)
            shapes[p + f"attn.{proj}.bias"] = (d,)
        shapes[p + "mlp_ln.weight"] = (d,)
        shapes[p + "mlp_ln.bias"] = (d,)
        shapes[p + "mlp.fc1.weight"] = (f, d)
        shapes[p + "mlp.fc1.bias"] = (f,)
        shapes[p + "mlp.fc2.weight"] = (d, f)
        shapes[p + "mlp.fc2.bias"] = (d,)
    return shapes


def param_count(cfg: EncoderConfig) -> int:
    total = 0
    for shape in layout(cfg).values():
        n = 1
        for dim in shape:
            n *= dim
        total += n
    return total
