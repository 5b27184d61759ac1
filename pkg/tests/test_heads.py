import numpy as np
import pytest
import torch

from svdd.heads.cnn import CnnHead, CnnHeadConfig
from svdd.heads.inputs import prepare_input
from svdd.heads.resnet import BasicBlock, ResNet34, ResNet34Config, TinyResNet
from svdd.heads.train import TrainedHead, head_forward, score, softmax_probs

from helpers import naive_cnn_forward


def _head(model, input_hw):
    return TrainedHead(arch="cnn", model=model, input_hw=input_hw)


def test_zero_weights_zero_input_gives_zero_logits():
    cfg = CnnHeadConfig(feature_dim=8, input_frames=16, channels=(2, 2))
    model = CnnHead(cfg)
    with torch.no_grad():
        for p in model.parameters():
            p.zero_()
    logits = head_forward(_head(model, cfg.input_hw), np.zeros((16, 8), dtype=np.float32))
    np.testing.assert_array_equal(logits, [0.0, 0.0])


def test_doubling_fc_weights_doubles_logits(rng):
    torch.manual_seed(0)
    cfg = CnnHeadConfig(feature_dim=8, input_frames=16, channels=(2, 2))
    model = CnnHead(cfg)
    x = rng.standard_normal((16, 8)).astype(np.float32)
    head = _head(model, cfg.input_hw)
    base = head_forward(head, x)
    with torch.no_grad():
        model.fc.weight.mul_(2.0)
        model.fc.bias.mul_(2.0)
    np.testing.assert_allclose(head_forward(head, x), 2.0 * base, rtol=1e-5)


def test_cnn_matches_nested_loop_oracle(rng):
    torch.manual_seed(7)
    cfg = CnnHeadConfig(feature_dim=8, input_frames=8, channels=(2, 2))
    model = CnnHead(cfg)
    x = rng.standard_normal((8, 8)).astype(np.float32)

    model.eval()
    with torch.no_grad():
        fast = model(torch.from_numpy(x)[None, None])[0].numpy()
    expected = naive_cnn_forward(
        x[None].astype(np.float64),
        model.conv1.weight.detach().numpy().astype(np.float64),
        model.conv1.bias.detach().numpy().astype(np.float64),
        model.conv2.weight.detach().numpy().astype(np.float64),
        model.conv2.bias.detach().numpy().astype(np.float64),
        model.fc.weight.detach().numpy().astype(np.float64),
        model.fc.bias.detach().numpy().astype(np.float64),
    )
    assert np.max(np.abs(fast - expected)) < 1e-6


def test_cnn_config_invariants():
    with pytest.raises(ValueError, match="kernel_size"):
        CnnHeadConfig(feature_dim=8, kernel_size=3)
    with pytest.raises(ValueError, match="two conv layers"):
        CnnHeadConfig(feature_dim=8, channels=(4, 4, 4))
    with pytest.raises(ValueError, match="feature_dim"):
        CnnHeadConfig(feature_dim=3)


def test_resnet34_has_34_weighted_layers():
    model = ResNet34(ResNet34Config())
    convs = sum(1 for m in model.modules() if isinstance(m, torch.nn.Conv2d))
    fcs = sum(1 for m in model.modules() if isinstance(m, torch.nn.Linear))
    shortcut_convs = sum(
        1 for m in model.modules()
        if isinstance(m, BasicBlock) and not isinstance(m.shortcut, torch.nn.Identity)
    )
    assert convs - shortcut_convs + fcs == 34
    # projection shortcuts appear exactly where stage dimensions change
    assert shortcut_convs == 3


def test_resnet34_forward_shape():
    model = ResNet34()
    model.eval()
    with torch.no_grad():
        out = model(torch.zeros(2, 1, 224, 224))
    assert out.shape == (2, 2)


def test_identity_shortcut_block_is_identity_on_nonnegative_input(rng):
    block = BasicBlock(4, 4, stride=1)
    with torch.no_grad():
        block.conv1.weight.zero_()
        block.conv2.weight.zero_()
        for bn in (block.bn1, block.bn2):
            bn.weight.fill_(1.0)
            bn.bias.zero_()
            bn.running_mean.zero_()
            bn.running_var.fill_(1.0)
    block.eval()
    x = torch.from_numpy(np.abs(rng.standard_normal((1, 4, 6, 6))).astype(np.float32))
    with torch.no_grad():
        out = block(x)
    torch.testing.assert_close(out, x)


def test_tiny_resnet_is_small():
    model = TinyResNet()
    assert sum(p.numel() for p in model.parameters()) < 5000


def test_softmax_hand_cases():
    np.testing.assert_allclose(softmax_probs(np.array([0.0, 0.0])), [0.5, 0.5], atol=1e-12)
    probs = softmax_probs(np.array([50.0, 0.0]))
    assert probs[0] > 1.0 - 1e-6
    probs = softmax_probs(np.array([1.0, -1.0]))
    assert abs(probs[0] - 0.8807970779778823) < 1e-9
    assert abs(probs.sum() - 1.0) < 1e-6
    assert np.all(probs > 0.0) and np.all(probs < 1.0)


def test_argmax_invariant_under_logit_shift(rng):
    logits = rng.standard_normal(2)
    assert np.argmax(logits) == np.argmax(logits + 13.7)
    np.testing.assert_allclose(softmax_probs(logits), softmax_probs(logits + 13.7), atol=1e-9)


def test_score_is_bonafide_probability(rng):
    torch.manual_seed(1)
    cfg = CnnHeadConfig(feature_dim=8, input_frames=16, channels=(2, 2))
    model = CnnHead(cfg)
    head = _head(model, cfg.input_hw)
    x = rng.standard_normal((20, 8)).astype(np.float32)
    s = score(head, x)
    logits = head_forward(head, x)
    assert 0.0 < s < 1.0
    assert abs(s - softmax_probs(logits)[0]) < 1e-9


def test_dimension_mismatch_rejected(rng):
    cfg = CnnHeadConfig(feature_dim=8, input_frames=16, channels=(2, 2))
    head = _head(CnnHead(cfg), cfg.input_hw)
    with pytest.raises(ValueError, match="feature dimension"):
        head_forward(head, np.zeros((16, 12), dtype=np.float32))


def test_prepare_input_resizes_and_standardizes(rng):
    x = rng.standard_normal((37, 9)).astype(np.float32) * 4.0 + 2.0
    out = prepare_input(x, (16, 9))
    assert out.shape == (1, 16, 9)
    assert abs(float(out.mean())) < 1e-5
    assert abs(float(out.std()) - 1.0) < 1e-4
    # None width keeps the feature axis
    assert prepare_input(x, (16, None)).shape == (1, 16, 9)
