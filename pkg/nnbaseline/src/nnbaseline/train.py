"""Training loop: MSE on normalized labels, Adam with cosine annealing,
rotation/mirror augmentation, early stopping on validation loss, and a
best-validation checkpoint. The per-epoch train/val losses are logged to
CSV (epoch 0 is the untrained model's validation loss)."""

from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict, dataclass

import torch
from torch import nn
from torch.utils.data import DataLoader

from .data import BettiDataset, read_manifest
from .model import BettiNet
from .normalize import NormalizationSpec


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 1e-3
    epochs: int = 30
    batch_size: int = 32
    patience: int = 5
    seed: int = 0
    augment: bool = True

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(asdict(self), f, indent=2)

    @classmethod
    def load(cls, path) -> "TrainConfig":
        with open(path) as f:
            return cls(**json.load(f))


@torch.no_grad()
def eval_mse(model: nn.Module, loader: DataLoader) -> float:
    model.eval()
    total, n = 0.0, 0
    for x, y in loader:
        pred = model(x)
        total += nn.functional.mse_loss(pred, y, reduction="sum").item()
        n += y.numel()
    return total / n


def train(manifest_path, images_root, cfg: TrainConfig, out_dir,
          init_from=None) -> dict:
    """Train on the manifest's train split, select on val. Writes
    checkpoint.pt, config.json and log.csv into out_dir; returns a summary
    dict with the loss history and best epoch."""
    os.makedirs(out_dir, exist_ok=True)
    torch.manual_seed(cfg.seed)
    records = read_manifest(manifest_path)
    spec = NormalizationSpec()
    aug_seed = cfg.seed if cfg.augment else None
    train_ds = BettiDataset(records, images_root, "train", spec, aug_seed)
    val_ds = BettiDataset(records, images_root, "val", spec)
    train_loader = DataLoader(train_ds, batch_size=cfg.batch_size,
                              shuffle=True,
                              generator=torch.Generator().manual_seed(cfg.seed))
    val_loader = DataLoader(val_ds, batch_size=cfg.batch_size)

    model = BettiNet()
    if init_from is not None:
        model.load_state_dict(torch.load(init_from, weights_only=True))
    opt = torch.optim.Adam(model.parameters(), lr=cfg.lr)
    sched = torch.optim.lr_scheduler.CosineAnnealingLR(opt, T_max=cfg.epochs)

    history = [(0, float("nan"), eval_mse(model, val_loader))]
    best_val = history[0][2]
    best_epoch = 0
    ckpt = os.path.join(out_dir, "checkpoint.pt")
    torch.save(model.state_dict(), ckpt)
    since_best = 0
    for epoch in range(1, cfg.epochs + 1):
        train_ds.set_epoch(epoch)
        model.train()
        total, n = 0.0, 0
        for x, y in train_loader:
            opt.zero_grad()
            loss = nn.functional.mse_loss(model(x), y)
            loss.backward()
            opt.step()
            total += loss.item() * y.shape[0]
            n += y.shape[0]
        sched.step()
        val = eval_mse(model, val_loader)
        history.append((epoch, total / n, val))
        if val < best_val:
            best_val, best_epoch, since_best = val, epoch, 0
            torch.save(model.state_dict(), ckpt)
        else:
            since_best += 1
            if since_best >= cfg.patience:
                break

    cfg.save(os.path.join(out_dir, "config.json"))
    with open(os.path.join(out_dir, "log.csv"), "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["epoch", "train_mse", "val_mse"])
        w.writerows(history)
    return {"history": history, "best_epoch": best_epoch,
            "best_val": best_val, "checkpoint": ckpt}
