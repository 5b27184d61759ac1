import numpy as np
import pytest
import torch

from svdd.heads.cnn import CnnHeadConfig
from svdd.heads.gradcheck import grad_check
from svdd.heads.headio import load_head, save_head
from svdd.heads.resnet import TinyResNet
from svdd.heads.train import (
    BONAFIDE,
    DEEPFAKE,
    DivergenceError,
    TrainConfig,
    TrainedHead,
    build_model,
    train,
)
from svdd.heads.cnn import CnnHead
from svdd import oracles


def blob_features(rng, n_per_class, separation=3.0, frames=16, dims=8):
    """Two Gaussian blobs rendered as feature matrices; returns (features, labels)."""
    features, labels = [], []
    for label, center in ((BONAFIDE, separation), (DEEPFAKE, -separation)):
        for _ in range(n_per_class):
            base = rng.standard_normal((frames, dims)) + center
            features.append(base.astype(np.float32))
            labels.append(label)
    return features, labels


def _cfg(**kw):
    defaults = dict(max_epochs=5, batch_size=32, seed=3)
    defaults.update(kw)
    return TrainConfig(**defaults)


ARCH = CnnHeadConfig(feature_dim=8, input_frames=16, channels=(2, 2))


def test_separable_blobs_train_fast(rng):
    x_train, y_train = blob_features(rng, 100)
    x_val, y_val = blob_features(rng, 30)
    head = train("cnn", ARCH, x_train, y_train, x_val, y_val, _cfg())
    assert head.history[-1]["train_loss"] < head.history[0]["train_loss"] or \
        head.history[0]["val_eer"] == 0.0
    assert min(h["val_eer"] for h in head.history) <= 0.05
    assert len(head.history) <= 5


def test_zero_learning_rate_freezes_weights(rng):
    x_train, y_train = blob_features(rng, 20)
    x_val, y_val = blob_features(rng, 10)
    torch.manual_seed(3)
    reference = build_model("cnn", ARCH)
    head = train("cnn", ARCH, x_train, y_train, x_val, y_val, _cfg(lr=0.0, max_epochs=3))
    for (name, got), (_, want) in zip(head.model.state_dict().items(),
                                      reference.state_dict().items()):
        torch.testing.assert_close(got, want, atol=0.0, rtol=0.0, msg=name)


def test_single_adam_step_matches_hand_computation():
    w = torch.nn.Parameter(torch.tensor([1.0], dtype=torch.float64))
    opt = torch.optim.Adam([w], lr=0.001, betas=(0.9, 0.999), eps=1e-8)
    (w ** 2).sum().backward()
    opt.step()
    expected = oracles.adam_single_step(1.0, grad=2.0, lr=0.001)
    assert abs(float(w.item()) - expected) < 1e-12
    assert abs(float(w.item()) - 0.999) < 1e-6


def test_training_is_bit_deterministic(rng):
    x_train, y_train = blob_features(rng, 30)
    x_val, y_val = blob_features(rng, 10)
    a = train("cnn", ARCH, x_train, y_train, x_val, y_val, _cfg(max_epochs=2))
    b = train("cnn", ARCH, x_train, y_train, x_val, y_val, _cfg(max_epochs=2))
    for (name, ta), (_, tb) in zip(a.model.state_dict().items(), b.model.state_dict().items()):
        assert torch.equal(ta, tb), name
    assert a.history == b.history


def test_both_classes_required(rng):
    x, _ = blob_features(rng, 4)
    with pytest.raises(ValueError, match="both classes"):
        train("cnn", ARCH, x, [BONAFIDE] * len(x), x, [BONAFIDE] * len(x), _cfg())
    with pytest.raises(ValueError, match="non-empty"):
        train("cnn", ARCH, [], [], x, [BONAFIDE, DEEPFAKE] * 4, _cfg())


def test_divergence_reports_epoch_and_batch(rng):
    features = [np.full((16, 8), 1e18, dtype=np.float32) for _ in range(8)]
    labels = [BONAFIDE, DEEPFAKE] * 4
    with pytest.raises(DivergenceError, match="epoch 0, batch 0"):
        train("cnn", ARCH, features, labels, features, labels, _cfg(lr=1e6, max_epochs=1))


def test_early_stopping_respects_patience(rng):
    x_train, y_train = blob_features(rng, 40)
    x_val, y_val = blob_features(rng, 12)
    head = train("cnn", ARCH, x_train, y_train, x_val, y_val,
                 _cfg(max_epochs=30, early_stop_patience=2))
    # blobs separate immediately; the run must stop well short of 30 epochs
    assert len(head.history) <= 1 + 2 + 1


def test_head_save_load_roundtrip(tmp_path, rng):
    x_train, y_train = blob_features(rng, 20)
    x_val, y_val = blob_features(rng, 8)
    head = train("cnn", ARCH, x_train, y_train, x_val, y_val, _cfg(max_epochs=2))
    path = tmp_path / "head.svddtnsr"
    save_head(path, head, ARCH)
    back = load_head(path)
    assert back.arch == "cnn"
    assert back.history == head.history
    assert tuple(back.input_hw) == tuple(head.input_hw)
    for (name, ta), (_, tb) in zip(head.model.state_dict().items(),
                                   back.model.state_dict().items()):
        if name.endswith("num_batches_tracked"):
            continue
        torch.testing.assert_close(ta, tb, atol=0.0, rtol=0.0, msg=name)

    x = rng.standard_normal((16, 8)).astype(np.float32)
    from svdd.heads.train import score
    assert abs(score(head, x) - score(back, x)) < 1e-7


def test_gradcheck_tiny_cnn(rng):
    torch.manual_seed(5)
    model = CnnHead(CnnHeadConfig(feature_dim=8, input_frames=16, channels=(2, 2)))
    assert sum(p.numel() for p in model.parameters()) <= 5000
    inputs = torch.randn(4, 1, 16, 8, generator=torch.Generator().manual_seed(5))
    targets = torch.tensor([0, 1, 1, 0])
    assert grad_check(model, inputs, targets, n_params=120, seed=1) < 1e-3


def test_gradcheck_tiny_resnet(rng):
    torch.manual_seed(6)
    model = TinyResNet()
    inputs = torch.randn(4, 1, 32, 32, generator=torch.Generator().manual_seed(6))
    targets = torch.tensor([0, 1, 0, 1])
    assert grad_check(model, inputs, targets, n_params=120, seed=2) < 1e-3


def test_gradients_vanish_when_predictions_saturate():
    torch.manual_seed(9)
    model = CnnHead(CnnHeadConfig(feature_dim=8, input_frames=16, channels=(2, 2)))
    model.double()
    with torch.no_grad():
        model.fc.weight.zero_()
        model.fc.bias.copy_(torch.tensor([40.0, -40.0], dtype=torch.float64))
    inputs = torch.randn(4, 1, 16, 8, dtype=torch.float64,
                         generator=torch.Generator().manual_seed(9))
    targets = torch.zeros(4, dtype=torch.long)  # all bonafide, all correct, saturated
    loss = torch.nn.CrossEntropyLoss()(model(inputs), targets)
    loss.backward()
    grads = torch.cat([p.grad.flatten() for p in model.parameters()])
    assert float(grads.abs().max()) < 1e-10
