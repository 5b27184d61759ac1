"""Serialization of trained heads: tensor archive plus a JSON sidecar."""

import dataclasses
import json
import os
import tempfile

import numpy as np
import torch

from ..encoder.archive import read_archive, write_archive
from .cnn import CnnHeadConfig
from .resnet import ResNet34Config, TinyResNetConfig
from .train import ARCHITECTURES, TrainConfig, TrainedHead, build_model, input_hw_for

_CONFIG_TYPES = {
    "cnn": CnnHeadConfig,
    "resnet34": ResNet34Config,
    "tiny_resnet": TinyResNetConfig,
}


def sidecar_path(archive_path) -> str:
    return str(archive_path) + ".json"


def save_head(archive_path, head: TrainedHead, arch_config) -> None:
    tensors = {}
    for name, tensor in head.model.state_dict().items():
        if name.endswith("num_batches_tracked"):
            continue  # integer bookkeeping; not needed for inference
        tensors[name] = tensor.detach().numpy().astype(np.float32)
    write_archive(archive_path, tensors)

    sidecar = {
        "arch": head.arch,
        "arch_config": _config_to_dict(arch_config),
        "input_hw": list(head.input_hw),
        "train_config": dataclasses.asdict(head.train_config) if head.train_config else None,
        "history": head.history,
        "best_epoch": head.best_epoch,
        "class_order": ["bonafide", "deepfake"],
    }
    path = sidecar_path(archive_path)
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_head(archive_path) -> TrainedHead:
    with open(sidecar_path(archive_path), "r", encoding="utf-8") as fh:
        sidecar = json.load(fh)
    arch = sidecar["arch"]
    if arch not in ARCHITECTURES:
        raise ValueError(f"unknown head architecture {arch!r} in sidecar")
    arch_config = _config_from_dict(arch, sidecar["arch_config"])
    model = build_model(arch, arch_config)

    tensors = read_archive(archive_path)
    state = {name: torch.from_numpy(arr.copy()) for name, arr in tensors.items()}
    missing, unexpected = model.load_state_dict(state, strict=False)
    unexpected = [n for n in unexpected]
    missing = [n for n in missing if not n.endswith("num_batches_tracked")]
    if missing or unexpected:
        raise ValueError(f"head archive mismatch: missing={missing}, unexpected={unexpected}")

    train_cfg = TrainConfig(**sidecar["train_config"]) if sidecar.get("train_config") else None
    head = TrainedHead(
        arch=arch,
        model=model,
        input_hw=tuple(sidecar["input_hw"]),
        train_config=train_cfg,
        history=sidecar.get("history", []),
        best_epoch=sidecar.get("best_epoch", -1),
    )
    head.model.eval()
    return head


def _config_to_dict(arch_config) -> dict:
    out = {}
    for key, value in dataclasses.asdict(arch_config).items():
        out[key] = list(value) if isinstance(value, tuple) else value
    return out


def _config_from_dict(arch: str, data: dict):
    cls = _CONFIG_TYPES[arch]
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name in data:
            value = data[f.name]
            kwargs[f.name] = tuple(value) if isinstance(value, list) else value
    return cls(**kwargs)
