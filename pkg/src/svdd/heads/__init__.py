from .cnn import CnnHead, CnnHeadConfig
from .gradcheck import grad_check
from .headio import load_head, save_head
from .inputs import batch_inputs, prepare_input
from .resnet import BasicBlock, ResNet34, ResNet34Config, TinyResNet, TinyResNetConfig
from .train import (
    ARCHITECTURES,
    BONAFIDE,
    DEEPFAKE,
    DivergenceError,
    TrainConfig,
    TrainedHead,
    build_model,
    head_forward,
    score,
    score_batch,
    softmax_probs,
    train,
)

__all__ = [
    "ARCHITECTURES",
    "BONAFIDE",
    "BasicBlock",
    "CnnHead",
    "CnnHeadConfig",
    "DEEPFAKE",
    "DivergenceError",
    "ResNet34",
    "ResNet34Config",
    "TinyResNet",
    "TinyResNetConfig",
    "TrainConfig",
    "TrainedHead",
    "batch_inputs",
    "build_model",
    "grad_check",
    "head_forward",
    "load_head",
    "prepare_input",
    "save_head",
    "score",
    "score_batch",
    "softmax_probs",
    "train",
]
