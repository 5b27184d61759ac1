"""Core containers shared by the feature extractors."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class FeatureKind(str, Enum):
    LOGMEL = "LogMel"
    MFCC = "MFCC"
    LFCC = "LFCC"
    CQCC = "CQCC"
    ENCODING = "Encoding"


@dataclass(frozen=True)
class Waveform:
    """Mono audio samples in [-1, 1] at a fixed sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError(f"samples must be 1-D, got shape {samples.shape}")
        if samples.size == 0:
            raise ValueError("samples must be non-empty")
        object.__setattr__(self, "samples", samples)

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass
class FeatureMatrix:
    """T x D feature matrix with provenance metadata.

    values are float32, time-major; frame_rate is frames per second.
    """

    values: np.ndarray
    frame_rate: float
    kind: FeatureKind
    source_clip: str = field(default="")

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float32)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError(f"values must be a T x D matrix with T,D >= 1, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("feature matrix contains non-finite values")
        self.values = values

    @property
    def n_frames(self) -> int:
        return self.values.shape[0]

    @property
    def n_dims(self) -> int:
        return self.values.shape[1]
