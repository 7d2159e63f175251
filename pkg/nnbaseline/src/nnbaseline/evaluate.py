"""Evaluation: denormalized, integer-rounded predictions scored per
(dimension, noise level) in the shared report CSV schema."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np
import torch

from .data import BettiDataset, read_manifest
from .model import BettiNet
from .normalize import NormalizationSpec, denormalize_labels

REPORT_HEADER = ("dataset", "method", "dim", "noise_level", "mae", "std", "n")


@dataclass(frozen=True)
class ReportRow:
    dataset: str
    method: str
    dim: int
    noise_level: str
    mae: float
    std: float
    n: int


@torch.no_grad()
def predict(model, records, images_root, spec=NormalizationSpec()):
    """Integer (beta0, beta1) predictions keyed by record id."""
    model.eval()
    ds = BettiDataset(records, images_root, records[0].split, spec)
    out = {}
    for rec, (x, _) in zip(ds.records, ds):
        y = model(x.unsqueeze(0))[0].tolist()
        b0, b1 = denormalize_labels(y, spec)
        out[rec.id] = (round(b0), round(b1))
    return out


def evaluate(checkpoint, manifest_path, images_root, split: str = "test",
             method: str = "NN") -> list[ReportRow]:
    records = [r for r in read_manifest(manifest_path) if r.split == split]
    if not records:
        raise ValueError(f"no records in split {split!r}")
    model = BettiNet()
    model.load_state_dict(torch.load(checkpoint, weights_only=True))
    preds = predict(model, records, images_root)
    rows = []
    dataset = records[0].dataset
    levels = sorted({r.noise_level for r in records})
    for level in levels:
        recs = [r for r in records if r.noise_level == level]
        for dim in (0, 1):
            err = np.abs([
                preds[r.id][dim] - (r.beta0, r.beta1)[dim] for r in recs
            ]).astype(np.float64)
            rows.append(ReportRow(dataset, method, dim, level,
                                  float(err.mean()), float(err.std()),
                                  len(recs)))
    return rows


def write_report(rows, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(REPORT_HEADER)
        for r in rows:
            w.writerow([r.dataset, r.method, r.dim, r.noise_level,
                        f"{r.mae:.6f}", f"{r.std:.6f}", r.n])
