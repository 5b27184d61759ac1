import struct

import numpy as np
import pytest

from svdd.encoder.archive import ArchiveError, read_archive, write_archive
from svdd.encoder.config import layout, named_config
from svdd.encoder.model import WeightValidationError, load_weights
from svdd.encoder.randinit import random_weight_tensors, toy_config


def test_roundtrip_bit_identical(tmp_path, rng):
    tensors = {
        "a.weight": rng.standard_normal((3, 4)).astype(np.float32),
        "a.bias": rng.standard_normal(3).astype(np.float32),
        "scalarish": rng.standard_normal((1,)).astype(np.float32),
    }
    path = tmp_path / "t.svddtnsr"
    write_archive(path, tensors)
    back = read_archive(path)
    assert set(back) == set(tensors)
    for name in tensors:
        assert back[name].tobytes() == tensors[name].tobytes()
        assert back[name].shape == tensors[name].shape


def test_magic_and_version(tmp_path):
    path = tmp_path / "t.svddtnsr"
    write_archive(path, {"x": np.zeros(2, dtype=np.float32)})
    raw = bytearray(path.read_bytes())
    assert raw[:8] == b"SVDDTNSR"
    version, header_len = struct.unpack("<II", raw[8:16])
    assert version == 1
    assert header_len > 0

    raw[0] = ord("X")
    path.write_bytes(bytes(raw))
    with pytest.raises(ArchiveError, match="bad magic"):
        read_archive(path)


def test_blob_corruption_fails_checksum(tmp_path):
    path = tmp_path / "t.svddtnsr"
    write_archive(path, {"x": np.ones(8, dtype=np.float32)})
    raw = bytearray(path.read_bytes())
    raw[-10] ^= 0xFF  # flip a bit inside the blob
    path.write_bytes(bytes(raw))
    with pytest.raises(ArchiveError, match="checksum failure"):
        read_archive(path)


def test_load_weights_reports_missing_tensor(tmp_path):
    cfg = toy_config(n_blocks=1, d_model=4, n_heads=2, d_ff=8, n_mels=4, max_frames=8)
    tensors = random_weight_tensors(cfg, seed=0)
    del tensors["blocks.0.attn.q.weight"]
    path = tmp_path / "w.svddtnsr"
    write_archive(path, tensors)
    with pytest.raises(WeightValidationError, match="missing tensor 'blocks.0.attn.q.weight'"):
        load_weights(path, cfg)


def test_load_weights_reports_shape_mismatch(tmp_path):
    cfg = toy_config(n_blocks=1, d_model=4, n_heads=2, d_ff=8, n_mels=4, max_frames=8)
    tensors = random_weight_tensors(cfg, seed=0)
    tensors["conv1.bias"] = np.zeros(5, dtype=np.float32)
    path = tmp_path / "w.svddtnsr"
    write_archive(path, tensors)
    with pytest.raises(WeightValidationError, match="shape mismatch for 'conv1.bias'"):
        load_weights(path, cfg)


def test_load_weights_rejects_unexpected_tensor(tmp_path):
    cfg = toy_config(n_blocks=1, d_model=4, n_heads=2, d_ff=8, n_mels=4, max_frames=8)
    tensors = random_weight_tensors(cfg, seed=0)
    tensors["decoder.secret"] = np.zeros(3, dtype=np.float32)
    path = tmp_path / "w.svddtnsr"
    write_archive(path, tensors)
    with pytest.raises(WeightValidationError, match="unexpected tensor 'decoder.secret'"):
        load_weights(path, cfg)


def test_load_weights_rejects_non_finite(tmp_path):
    cfg = toy_config(n_blocks=1, d_model=4, n_heads=2, d_ff=8, n_mels=4, max_frames=8)
    tensors = random_weight_tensors(cfg, seed=0)
    tensors["conv2.bias"] = np.array([np.nan] * 4, dtype=np.float32)
    path = tmp_path / "w.svddtnsr"
    write_archive(path, tensors)
    with pytest.raises(WeightValidationError, match="non-finite values in tensor 'conv2.bias'"):
        load_weights(path, cfg)


def test_full_toy_roundtrip_loads_clean(tmp_path):
    cfg = toy_config()
    path = tmp_path / "toy.svddtnsr"
    write_archive(path, random_weight_tensors(cfg, seed=3))
    weights = load_weights(path, cfg)
    assert len(weights.blocks) == cfg.n_blocks
    assert weights.conv1_w.shape == layout(cfg)["conv1.weight"]


def test_named_config_layout_counts():
    # layout completeness: block tensors dominate, stem and final norm fixed
    cfg = named_config("tiny")
    shapes = layout(cfg)
    # stem + final norm = 6 tensors; 16 per block (2 norms, 4 projections, 2 mlp mats, all with biases)
    assert len(shapes) == 6 + cfg.n_blocks * 16
