"""Dataset manifest records: line-delimited JSON, one record per image.

Labels on every record are the pre-noise ground truth of the clean image;
an N0 record is its own clean image.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

_FIELDS = ("id", "image_path", "dataset", "split", "noise_level",
           "clean_id", "beta0", "beta1", "seed")


@dataclass(frozen=True)
class ManifestRecord:
    id: str
    image_path: str
    dataset: str
    split: str
    noise_level: str
    clean_id: str
    beta0: int
    beta1: int
    seed: int


def write_manifest(records, path) -> None:
    with open(path, "w") as f:
        for rec in records:
            d = asdict(rec)
            f.write(json.dumps({k: d[k] for k in _FIELDS}) + "\n")


def read_manifest(path) -> list[ManifestRecord]:
    records = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            d = json.loads(line)
            records.append(ManifestRecord(**{k: d[k] for k in _FIELDS}))
    return records
