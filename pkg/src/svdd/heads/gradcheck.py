"""Finite-difference validation of the training gradients."""

import numpy as np
import torch
import torch.nn as nn


def grad_check(model: nn.Module, inputs: torch.Tensor, targets: torch.Tensor,
               n_params: int = 120, h: float = 1e-3, seed: int = 0) -> float:
    """Max relative error between autograd and central finite differences.

    The model is evaluated in float64 on the cross-entropy loss of one batch.
    For each sampled parameter w the analytic dL/dw is compared against
    (L(w+h) - L(w-h)) / 2h; the relative error is |a - fd| / (|a| + |fd| + 1e-8).
    """
    model = model.double()
    model.train()
    inputs = inputs.double()
    loss_fn = nn.CrossEntropyLoss()

    def loss_value() -> float:
        with torch.no_grad():
            return float(loss_fn(model(inputs), targets))

    model.zero_grad()
    loss_fn(model(inputs), targets).backward()

    params = [p for p in model.parameters() if p.requires_grad]
    flat_grads = torch.cat([p.grad.flatten() for p in params])
    total = flat_grads.numel()

    rng = np.random.default_rng(seed)
    picks = rng.choice(total, size=min(n_params, total), replace=False)

    # map flat index -> (parameter tensor, inner index)
    bounds = np.cumsum([p.numel() for p in params])
    worst = 0.0
    for flat_idx in picks:
        p_idx = int(np.searchsorted(bounds, flat_idx, side="right"))
        inner = int(flat_idx - (bounds[p_idx - 1] if p_idx else 0))
        param = params[p_idx]
        view = param.data.flatten()

        original = view[inner].item()
        view[inner] = original + h
        up = loss_value()
        view[inner] = original - h
        down = loss_value()
        view[inner] = original

        fd = (up - down) / (2.0 * h)
        analytic = flat_grads[flat_idx].item()
        rel = abs(analytic - fd) / (abs(analytic) + abs(fd) + 1e-8)
        worst = max(worst, rel)
    return worst
