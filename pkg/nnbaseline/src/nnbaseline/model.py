"""Small convolutional regressor: a handful of conv/pool stages and a
2-output head. Global average pooling keeps it input-size agnostic."""

from __future__ import annotations

import torch
from torch import nn


class BettiNet(nn.Module):
    def __init__(self, channels=(16, 32, 64, 128)):
        super().__init__()
        layers = []
        c_in = 1
        for c in channels:
            layers += [
                nn.Conv2d(c_in, c, 3, padding=1),
                nn.ReLU(inplace=True),
                nn.MaxPool2d(2),
            ]
            c_in = c
        self.features = nn.Sequential(*layers)
        self.pool = nn.AdaptiveAvgPool2d(1)
        self.head = nn.Sequential(
            nn.Flatten(),
            nn.Linear(c_in, 64),
            nn.ReLU(inplace=True),
            nn.Linear(64, 2),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.head(self.pool(self.features(x)))
