"""Shaping feature matrices into the fixed-size maps the heads consume."""

import numpy as np
import torch
import torch.nn.functional as F


def prepare_input(values: np.ndarray, target_hw: tuple[int, int | None],
                  standardize: bool = True) -> torch.Tensor:
    """Resize a (T, D) matrix to a 1-channel map of target_hw via bilinear interpolation.

    A None width keeps the feature dimension untouched (time-only resize).
    Standardization is per map: zero mean, unit variance with a small floor.
    """
    x = torch.from_numpy(np.array(values, dtype=np.float32, copy=True))
    if x.ndim != 2:
        raise ValueError(f"expected a 2-D feature matrix, got shape {tuple(x.shape)}")
    h, w = target_hw
    w = x.shape[1] if w is None else w
    x = x[None, None]
    if x.shape[2] != h or x.shape[3] != w:
        x = F.interpolate(x, size=(h, w), mode="bilinear", align_corners=False)
    x = x[0]
    if standardize:
        std = x.std()
        x = (x - x.mean()) / (std if std > 1e-6 else 1.0)
    return x


def batch_inputs(matrices: list[np.ndarray], target_hw: tuple[int, int | None]) -> torch.Tensor:
    return torch.stack([prepare_input(m, target_hw) for m in matrices])
