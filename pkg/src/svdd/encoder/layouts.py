"""Shipped layout manifests: the authoritative tensor inventory per size."""

import json
from importlib import resources

from .config import EncoderConfig, layout, named_config, param_count


def manifest_dict(cfg: EncoderConfig) -> dict:
    return {
        "size_name": cfg.size_name,
        "n_blocks": cfg.n_blocks,
        "d_model": cfg.d_model,
        "n_heads": cfg.n_heads,
        "d_ff": cfg.d_ff,
        "n_mels": cfg.n_mels,
        "max_frames": cfg.max_frames,
        "parameter_count": param_count(cfg),
        "tensors": {name: list(shape) for name, shape in layout(cfg).items()},
    }


def load_manifest(size_name: str) -> dict:
    ref = resources.files(__package__).joinpath(f"layouts/{size_name.lower()}.json")
    return json.loads(ref.read_text(encoding="utf-8"))


def write_all(directory) -> None:
    """Regenerate the four shipped manifest files (development helper)."""
    import os

    os.makedirs(str(directory), exist_ok=True)
    for size in ("tiny", "base", "small", "medium"):
        doc = manifest_dict(named_config(size))
        with open(os.path.join(str(directory), f"{size}.json"), "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
