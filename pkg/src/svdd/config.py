"""Experiment configuration schema shared by the pipeline, service and CLI."""

import hashlib
import json
import zlib
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

FEATURE_SYSTEMS = ("w_tiny", "w_base", "w_small", "w_medium", "w_custom",
                   "mfcc", "lfcc", "cqcc", "logmel")
ENCODER_SYSTEMS = ("w_tiny", "w_base", "w_small", "w_medium", "w_custom")


class EncoderDims(BaseModel):
    n_blocks: int = 2
    d_model: int = 8
    n_heads: int = 2
    d_ff: int = 32


class FeatureSpec(BaseModel):
    system: Literal[FEATURE_SYSTEMS] = "mfcc"
    weights_path: Optional[str] = None
    encoder: Optional[EncoderDims] = None
    n_filters: int = 40
    n_coeffs: int = 20
    bins_per_octave: int = 24
    fmin: float = 31.25
    fmax: Optional[float] = None

    @model_validator(mode="after")
    def _check(self):
        if self.system in ENCODER_SYSTEMS and not self.weights_path:
            raise ValueError(f"feature system {self.system!r} requires weights_path")
        if self.system == "w_custom" and self.encoder is None:
            raise ValueError("w_custom requires explicit encoder dims")
        return self

    def needs_encoder(self) -> bool:
        return self.system in ENCODER_SYSTEMS

    def cache_key(self) -> str:
        """Content hash naming cache entries; covers parameters and weight bytes."""
        payload = self.model_dump()
        if self.weights_path:
            payload["weights_crc"] = _file_crc(self.weights_path)
        payload.pop("weights_path", None)
        canon = json.dumps(payload, sort_keys=True)
        return hashlib.sha1(canon.encode("utf-8")).hexdigest()[:12]


class TrainSpec(BaseModel):
    lr: float = 0.001
    batch_size: int = 32
    max_epochs: int = 50
    early_stop_patience: int = 5


class ExperimentConfig(BaseModel):
    manifest: str
    cache_dir: str
    out_dir: str
    variant: Literal["vocals", "mixtures"] = "vocals"
    feature: FeatureSpec = Field(default_factory=FeatureSpec)
    head: Literal["cnn", "resnet34"] = "cnn"
    train: TrainSpec = Field(default_factory=TrainSpec)
    seed: int = 0
    workers: int = 1


_crc_cache: dict[str, int] = {}


def _file_crc(path: str) -> int:
    if path not in _crc_cache:
        crc = 0
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 20), b""):
                crc = zlib.crc32(chunk, crc)
        _crc_cache[path] = crc & 0xFFFFFFFF
    return _crc_cache[path]
