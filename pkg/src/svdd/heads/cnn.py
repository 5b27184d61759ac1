"""Compact two-layer convolutional classifier head."""

from dataclasses import dataclass

import torch
import torch.nn as nn


@dataclass(frozen=True)
class CnnHeadConfig:
    feature_dim: int
    input_frames: int = 256
    channels: tuple[int, int] = (16, 32)
    kernel_size: int = 5

    def __post_init__(self):
        if self.kernel_size != 5:
            raise ValueError("kernel_size is fixed at 5")
        if len(self.channels) != 2:
            raise ValueError("exactly two conv layers")
        if self.feature_dim < 4:
            raise ValueError("feature_dim must be >= 4 to survive two 2x2 pools")

    @property
    def input_hw(self) -> tuple[int, int]:
        return (self.input_frames, self.feature_dim)


class CnnHead(nn.Module):
    """conv5 -> ReLU -> maxpool2, twice, then a single fully connected layer to 2 logits."""

    def __init__(self, cfg: CnnHeadConfig):
        super().__init__()
        self.cfg = cfg
        c1, c2 = cfg.channels
        pad = cfg.kernel_size // 2
        self.conv1 = nn.Conv2d(1, c1, cfg.kernel_size, padding=pad)
        self.conv2 = nn.Conv2d(c1, c2, cfg.kernel_size, padding=pad)
        self.pool = nn.MaxPool2d(2, 2)
        self.relu = nn.ReLU()
        with torch.no_grad():
            flat = self._features(torch.zeros(1, 1, *cfg.input_hw)).shape[1]
        self.fc = nn.Linear(flat, 2)

    def _features(self, x: torch.Tensor) -> torch.Tensor:
        x = self.pool(self.relu(self.conv1(x)))
        x = self.pool(self.relu(self.conv2(x)))
        return x.flatten(1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.fc(self._features(x))
