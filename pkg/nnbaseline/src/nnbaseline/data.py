"""Manifest and image loading plus the augmented training dataset.

The manifest is line-delimited records with named keys; only the fields
needed here are read, so extra keys are ignored.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np
import torch
from PIL import Image
from torch.utils.data import Dataset

from .normalize import NormalizationSpec, normalize_labels


@dataclass(frozen=True)
class Record:
    id: str
    image_path: str
    dataset: str
    split: str
    noise_level: str
    beta0: int
    beta1: int


def read_manifest(path) -> list[Record]:
    records = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            d = json.loads(line)
            records.append(Record(
                id=d["id"], image_path=d["image_path"], dataset=d["dataset"],
                split=d["split"], noise_level=d["noise_level"],
                beta0=int(d["beta0"]), beta1=int(d["beta1"]),
            ))
    return records


def load_image(path) -> np.ndarray:
    with Image.open(path) as im:
        arr = np.asarray(im.convert("L"), dtype=np.uint8)
    vals = np.unique(arr)
    if not np.isin(vals, (0, 255)).all():
        raise ValueError(f"non-binary pixel values in {path}")
    return arr == 255


def augment(img: torch.Tensor, rot_k: int, flip_h: bool, flip_v: bool) -> torch.Tensor:
    """90-degree rotation and mirroring; these isometries never change the
    (beta0, beta1) targets."""
    if rot_k:
        img = torch.rot90(img, rot_k, dims=(-2, -1))
    if flip_h:
        img = torch.flip(img, dims=(-1,))
    if flip_v:
        img = torch.flip(img, dims=(-2,))
    return img


class BettiDataset(Dataset):
    """(image, normalized label) pairs for one split; augmentation is
    seeded per (epoch, index) so every epoch is reproducible."""

    def __init__(self, records, root, split: str, spec=NormalizationSpec(),
                 augment_seed: int | None = None):
        self.records = [r for r in records if r.split == split]
        if not self.records:
            raise ValueError(f"no records in split {split!r}")
        self.root = os.fspath(root)
        self.spec = spec
        self.augment_seed = augment_seed
        self.epoch = 0

    def set_epoch(self, epoch: int) -> None:
        self.epoch = epoch

    def __len__(self):
        return len(self.records)

    def __getitem__(self, i):
        rec = self.records[i]
        img = load_image(os.path.join(self.root, rec.image_path))
        x = torch.from_numpy(img.astype(np.float32)).unsqueeze(0)
        if self.augment_seed is not None:
            rng = np.random.default_rng(
                [self.augment_seed, self.epoch, i]
            )
            x = augment(x, int(rng.integers(4)), bool(rng.integers(2)),
                        bool(rng.integers(2)))
        y = torch.tensor(normalize_labels((rec.beta0, rec.beta1), self.spec),
                         dtype=torch.float32)
        return x, y
