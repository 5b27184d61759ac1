"""ResNet-34 classifier head over single-channel feature maps."""

from dataclasses import dataclass

import torch.nn as nn


@dataclass(frozen=True)
class ResNet34Config:
    input_hw: tuple[int, int] = (224, 224)
    stage_blocks: tuple[int, int, int, int] = (3, 4, 6, 3)
    stage_channels: tuple[int, int, int, int] = (64, 128, 256, 512)

    def __post_init__(self):
        # 1 stem conv + 2 convs per residual block + final FC = 34 weighted layers
        if 2 + 2 * sum(self.stage_blocks) != 34:
            raise ValueError("stage blocks must total 16 for 34 weighted layers")


class BasicBlock(nn.Module):
    def __init__(self, in_ch: int, out_ch: int, stride: int = 1):
        super().__init__()
        self.conv1 = nn.Conv2d(in_ch, out_ch, 3, stride=stride, padding=1, bias=False)
        self.bn1 = nn.BatchNorm2d(out_ch)
        self.conv2 = nn.Conv2d(out_ch, out_ch, 3, padding=1, bias=False)
        self.bn2 = nn.BatchNorm2d(out_ch)
        self.relu = nn.ReLU(inplace=True)
        if stride != 1 or in_ch != out_ch:
            # projection shortcut, used only where stage dimensions change
            self.shortcut = nn.Sequential(
                nn.Conv2d(in_ch, out_ch, 1, stride=stride, bias=False),
                nn.BatchNorm2d(out_ch),
            )
        else:
            self.shortcut = nn.Identity()

    def forward(self, x):
        out = self.relu(self.bn1(self.conv1(x)))
        out = self.bn2(self.conv2(out))
        return self.relu(out + self.shortcut(x))


class ResNet34(nn.Module):
    """7x7 stem, max pool, four stages of residual blocks, global average pool, FC."""

    def __init__(self, cfg: ResNet34Config = ResNet34Config()):
        super().__init__()
        self.cfg = cfg
        ch = cfg.stage_channels
        self.stem = nn.Sequential(
            nn.Conv2d(1, ch[0], 7, stride=2, padding=3, bias=False),
            nn.BatchNorm2d(ch[0]),
            nn.ReLU(inplace=True),
            nn.MaxPool2d(3, stride=2, padding=1),
        )
        stages = []
        in_ch = ch[0]
        for stage, (n_blocks, out_ch) in enumerate(zip(cfg.stage_blocks, ch)):
            for b in range(n_blocks):
                stride = 2 if stage > 0 and b == 0 else 1
                stages.append(BasicBlock(in_ch, out_ch, stride))
                in_ch = out_ch
        self.stages = nn.Sequential(*stages)
        self.gap = nn.AdaptiveAvgPool2d(1)
        self.fc = nn.Linear(ch[-1], 2)

    def forward(self, x):
        x = self.stem(x)
        x = self.stages(x)
        x = self.gap(x).flatten(1)
        return self.fc(x)


@dataclass(frozen=True)
class TinyResNetConfig:
    """One block per stage with narrow channels; for gradient checking only."""

    input_hw: tuple[int, int] = (32, 32)
    stage_blocks: tuple[int, int, int, int] = (1, 1, 1, 1)
    stage_channels: tuple[int, int, int, int] = (2, 2, 4, 4)


class TinyResNet(nn.Module):
    def __init__(self, cfg: TinyResNetConfig = TinyResNetConfig()):
        super().__init__()
        self.cfg = cfg
        ch = cfg.stage_channels
        self.stem = nn.Sequential(
            nn.Conv2d(1, ch[0], 7, stride=2, padding=3, bias=False),
            nn.BatchNorm2d(ch[0]),
            nn.ReLU(inplace=True),
            nn.MaxPool2d(3, stride=2, padding=1),
        )
        stages = []
        in_ch = ch[0]
        for stage, (n_blocks, out_ch) in enumerate(zip(cfg.stage_blocks, ch)):
            for b in range(n_blocks):
                stride = 2 if stage > 0 and b == 0 else 1
                stages.append(BasicBlock(in_ch, out_ch, stride))
                in_ch = out_ch
        self.stages = nn.Sequential(*stages)
        self.gap = nn.AdaptiveAvgPool2d(1)
        self.fc = nn.Linear(ch[-1], 2)

    def forward(self, x):
        x = self.stem(x)
        x = self.stages(x)
        x = self.gap(x).flatten(1)
        return self.fc(x)
