"""Supervised training of the classifier heads with Adam.

Class convention everywhere: logit/probability index 0 is bonafide, index 1
is deepfake; a clip's score is the softmax probability of the bonafide class.
"""

import copy
from dataclasses import dataclass, field

import numpy as np
import torch
import torch.nn as nn

from ..eval.eer import compute_eer_from_arrays
from .cnn import CnnHead, CnnHeadConfig
from .inputs import batch_inputs, prepare_input
from .resnet import ResNet34, ResNet34Config, TinyResNet, TinyResNetConfig

BONAFIDE, DEEPFAKE = 0, 1

ARCHITECTURES = {
    "cnn": (CnnHead, CnnHeadConfig),
    "resnet34": (ResNet34, ResNet34Config),
    "tiny_resnet": (TinyResNet, TinyResNetConfig),
}


class DivergenceError(Exception):
    pass


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    batch_size: int = 32
    max_epochs: int = 50
    early_stop_patience: int = 5
    seed: int = 0
    deterministic: bool = True

    def __post_init__(self):
        if self.lr < 0:
            raise ValueError("lr must be non-negative")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass
class TrainedHead:
    arch: str
    model: nn.Module
    input_hw: tuple[int, int | None]
    train_config: TrainConfig | None = None
    history: list[dict] = field(default_factory=list)
    best_epoch: int = -1

    def expected_dims(self) -> int | None:
        h, w = self.input_hw
        return w


def build_model(arch: str, arch_config) -> nn.Module:
    if arch not in ARCHITECTURES:
        raise ValueError(f"unknown head architecture {arch!r}; expected one of {sorted(ARCHITECTURES)}")
    model_cls, _ = ARCHITECTURES[arch]
    return model_cls(arch_config)


def input_hw_for(arch: str, arch_config) -> tuple[int, int | None]:
    if arch == "cnn":
        return arch_config.input_hw
    return arch_config.input_hw


def head_forward(head: TrainedHead, values: np.ndarray) -> np.ndarray:
    """Logits (bonafide, deepfake) for one feature matrix."""
    _check_dims(head, values)
    head.model.eval()
    with torch.no_grad():
        x = prepare_input(values, head.input_hw)[None]
        logits = head.model(x)[0].numpy()
    if not np.all(np.isfinite(logits)):
        raise FloatingPointError("non-finite logits")
    return logits


def score(head: TrainedHead, values: np.ndarray) -> float:
    """Softmax probability of the bonafide class; higher means more bonafide."""
    return float(softmax_probs(head_forward(head, values))[BONAFIDE])


def score_batch(head: TrainedHead, matrices: list[np.ndarray]) -> np.ndarray:
    for m in matrices:
        _check_dims(head, m)
    head.model.eval()
    with torch.no_grad():
        x = batch_inputs(matrices, head.input_hw)
        logits = head.model(x).numpy()
    probs = np.apply_along_axis(softmax_probs, 1, logits)
    return probs[:, BONAFIDE]


def softmax_probs(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max()
    e = np.exp(shifted)
    return e / e.sum()


def _check_dims(head: TrainedHead, values: np.ndarray) -> None:
    expected = head.expected_dims()
    if expected is not None and values.shape[1] != expected:
        raise ValueError(
            f"head expects feature dimension {expected}, got {values.shape[1]}"
        )


def train(arch: str, arch_config,
          train_features: list[np.ndarray], train_labels: list[int],
          val_features: list[np.ndarray], val_labels: list[int],
          cfg: TrainConfig = TrainConfig()) -> TrainedHead:
    """Minimize cross-entropy over shuffled mini-batches; keep the best-validation-EER weights.

    Fully reproducible for a fixed seed: the permutation stream, parameter
    init, and (in deterministic mode) single-threaded reductions are all
    pinned to cfg.seed.
    """
    if not train_features or not val_features:
        raise ValueError("training and validation sets must be non-empty")
    for name, labels in (("train", train_labels), ("validation", val_labels)):
        if len(set(labels)) < 2:
            raise ValueError(f"{name} set must contain both classes")

    if cfg.deterministic:
        torch.set_num_threads(1)
    torch.manual_seed(cfg.seed)
    model = build_model(arch, arch_config)
    input_hw = input_hw_for(arch, arch_config)

    x_train = batch_inputs(train_features, input_hw)
    y_train = torch.tensor(train_labels, dtype=torch.long)
    x_val = batch_inputs(val_features, input_hw)
    val_labels_arr = np.asarray(val_labels)

    loss_fn = nn.CrossEntropyLoss()
    optimizer = torch.optim.Adam(model.parameters(), lr=cfg.lr,
                                 betas=(cfg.beta1, cfg.beta2), eps=cfg.eps)
    rng = np.random.default_rng(cfg.seed)

    head = TrainedHead(arch=arch, model=model, input_hw=input_hw, train_config=cfg)
    best_eer = float("inf")
    best_state = copy.deepcopy(model.state_dict())
    epochs_since_best = 0

    for epoch in range(cfg.max_epochs):
        model.train()
        order = rng.permutation(len(train_features))
        losses = []
        for b0 in range(0, len(order), cfg.batch_size):
            idx = torch.from_numpy(order[b0:b0 + cfg.batch_size].copy())
            optimizer.zero_grad()
            loss = loss_fn(model(x_train[idx]), y_train[idx])
            if not torch.isfinite(loss):
                raise DivergenceError(
                    f"non-finite loss at epoch {epoch}, batch {b0 // cfg.batch_size}"
                )
            loss.backward()
            optimizer.step()
            losses.append(loss.item())

        model.eval()
        with torch.no_grad():
            val_logits = model(x_val).numpy()
        val_scores = np.apply_along_axis(softmax_probs, 1, val_logits)[:, BONAFIDE]
        val_eer, _ = compute_eer_from_arrays(
            val_scores[val_labels_arr == BONAFIDE], val_scores[val_labels_arr == DEEPFAKE]
        )
        head.history.append({"epoch": epoch, "train_loss": float(np.mean(losses)),
                             "val_eer": float(val_eer)})

        if val_eer < best_eer:
            best_eer = val_eer
            best_state = copy.deepcopy(model.state_dict())
            head.best_epoch = epoch
            epochs_since_best = 0
        else:
            epochs_since_best += 1
            if epochs_since_best > cfg.early_stop_patience:
                break

    model.load_state_dict(best_state)
    return head
