"""End-to-end benchmark plumbing: noisy-variant manifests, leakage-free
splits, cached diagram computation, PH evaluation and report emission.

All stages are deterministic functions of (inputs, seed); re-running any
stage with the same seed reproduces every output byte.
"""

from __future__ import annotations

import csv
import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .diagrams import PersistenceDiagram, load_diagram_csv, save_diagram_csv
from .fastph import persistence_fast
from .filtration import persistence_reduce
from .manifest import ManifestRecord, read_manifest, write_manifest
from .noise import LEVELS, apply_level, get_preset
from .raster import LabelPair, load_image, save_image
from .sedt import sedt
from .windowing import CalibrationGrid, calibrate, count_window, quantile_grid

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


def _variant_seed(base_seed: int, clean_id: str, level: str) -> int:
    digest = hashlib.sha256(f"{base_seed}:{clean_id}:{level}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def build_manifest(clean_dir, profile: str, seed: int,
                   levels=LEVELS) -> list[ManifestRecord]:
    """Emit one record per (clean image, level), writing the corrupted
    variants next to the clean images. Labels are copied from the clean
    record (pre-noise ground truth)."""
    clean_dir = os.fspath(clean_dir)
    clean_records = [
        r for r in read_manifest(os.path.join(clean_dir, "manifest.jsonl"))
        if r.noise_level == "N0"
    ]
    if not clean_records:
        raise ValueError(f"no clean (N0) records in {clean_dir}")
    out = []
    for rec in clean_records:
        img = None
        for level in levels:
            if level == "N0":
                out.append(replace(rec, split=""))
                continue
            if img is None:
                img = load_image(os.path.join(clean_dir, rec.image_path))
            vseed = _variant_seed(seed, rec.id, level)
            noisy = apply_level(img, get_preset(profile, level), vseed)
            vid = f"{rec.id}_{level}"
            rel = os.path.join("images", vid + ".png")
            save_image(noisy, os.path.join(clean_dir, rel))
            out.append(ManifestRecord(
                id=vid, image_path=rel, dataset=rec.dataset, split="",
                noise_level=level, clean_id=rec.id, beta0=rec.beta0,
                beta1=rec.beta1, seed=vseed,
            ))
    return out


def split_manifest(records, seed: int,
                   ratios=(0.70, 0.15, 0.15)) -> list[ManifestRecord]:
    """Assign train/val/test per clean id (all variants of a clean image
    share the split) by seeded shuffle."""
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError("ratios must sum to 1")
    clean_ids = sorted({r.clean_id for r in records})
    rng = np.random.default_rng(seed)
    rng.shuffle(clean_ids)
    n = len(clean_ids)
    n_train = int(n * ratios[0])
    n_val = int(n * ratios[1])
    assign = {}
    for i, cid in enumerate(clean_ids):
        if i < n_train:
            assign[cid] = "train"
        elif i < n_train + n_val:
            assign[cid] = "val"
        else:
            assign[cid] = "test"
    return [replace(r, split=assign[r.clean_id]) for r in records]


def image_key(img: np.ndarray) -> str:
    """Content hash of a binary image (diagram cache key)."""
    h = hashlib.sha256()
    h.update(str(img.shape).encode())
    h.update(np.packbits(img).tobytes())
    return h.hexdigest()


def diagram_for_image(img, image_id: str = "", cache_dir=None,
                      oracle: bool = False) -> PersistenceDiagram:
    """SEDT + persistence for one image, cached by content hash."""
    compute = persistence_reduce if oracle else persistence_fast
    if cache_dir is None:
        return compute(sedt(img), image_id)
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(os.fspath(cache_dir), image_key(img) + ".pd.csv")
    if os.path.exists(path):
        return load_diagram_csv(path, image_id)
    diagram = compute(sedt(img), image_id)
    tmp = path + ".tmp"
    save_diagram_csv(diagram, tmp)
    os.replace(tmp, path)
    return diagram


def _diagram_worker(args):
    root, rec_path, rec_id, cache_dir = args
    img = load_image(os.path.join(root, rec_path))
    diagram_for_image(img, rec_id, cache_dir)
    return rec_id


def compute_diagrams(records, root, cache_dir, threads: int = 1) -> dict:
    """Diagrams for all records, keyed by record id; parallel over images."""
    jobs = [(os.fspath(root), r.image_path, r.id, os.fspath(cache_dir))
            for r in records]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            list(pool.map(_diagram_worker, jobs, chunksize=4))
    out = {}
    for r in records:
        img = load_image(os.path.join(root, r.image_path))
        out[r.id] = diagram_for_image(img, r.id, cache_dir)
    return out


def run_ph_eval(records, root, cache_dir=None, grid: CalibrationGrid | None = None,
                calibration_mode: str = "validation", threads: int = 1,
                levels=LEVELS, grid_size: int = 25):
    """Calibrated-PH evaluation: one report row per (level, dim).

    `validation` mode calibrates the window on the validation split;
    `oracle` calibrates on the test split itself (upper-bound protocol).
    Returns (report rows, calibration results).
    """
    if calibration_mode not in ("validation", "oracle"):
        raise ValueError(f"unknown calibration mode {calibration_mode!r}")
    records = list(records)
    dataset = records[0].dataset if records else ""
    test = [r for r in records if r.split == "test"]
    calib_split = "val" if calibration_mode == "validation" else "test"
    calib = [r for r in records if r.split == calib_split]
    needed = {r.id: r for r in test + calib}
    diagrams = compute_diagrams(list(needed.values()), root,
                                cache_dir, threads) if cache_dir else {
        r.id: diagram_for_image(load_image(os.path.join(root, r.image_path)), r.id)
        for r in needed.values()
    }
    rows, results = [], []
    for level in levels:
        test_l = [r for r in test if r.noise_level == level]
        calib_l = [r for r in calib if r.noise_level == level]
        if not test_l or not calib_l:
            raise ValueError(f"no {calib_split}/test records at level {level}")
        for dim in (0, 1):
            cal_diags = [diagrams[r.id] for r in calib_l]
            cal_labels = [LabelPair(r.beta0, r.beta1) for r in calib_l]
            g = grid or quantile_grid(cal_diags, n=grid_size, dim=dim)
            res = calibrate(cal_diags, cal_labels, g, dim,
                            dataset_id=dataset, noise_level=level,
                            calibration_split=calib_split)
            results.append(res)
            preds = [count_window(diagrams[r.id], res.best, dim) for r in test_l]
            labels = [(r.beta0, r.beta1)[dim] for r in test_l]
            err = np.abs(np.asarray(preds, float) - np.asarray(labels, float))
            rows.append(ReportRow(dataset, "PH", dim, level,
                                  float(err.mean()), float(err.std()), len(test_l)))
    return rows, results


def _fmt_float(v: float) -> str:
    return f"{v:.6f}"


def write_report(rows, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(REPORT_HEADER)
        for r in rows:
            w.writerow([r.dataset, r.method, r.dim, r.noise_level,
                        _fmt_float(r.mae), _fmt_float(r.std), r.n])


def read_report(path) -> list[ReportRow]:
    rows = []
    with open(path) as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames) != REPORT_HEADER:
            raise ValueError(f"{path}: bad report header {reader.fieldnames}")
        for d in reader:
            rows.append(ReportRow(d["dataset"], d["method"], int(d["dim"]),
                                  d["noise_level"], float(d["mae"]),
                                  float(d["std"]), int(d["n"])))
    return rows


def write_calibration_csv(results, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["dataset", "noise_level", "dim", "birth_lb", "birth_ub",
                    "min_pers", "mae", "std", "n_samples", "calibration_split"])
        for r in results:
            w.writerow([r.dataset_id, r.noise_level, r.dim,
                        _fmt_float(r.best.birth_lb), _fmt_float(r.best.birth_ub),
                        _fmt_float(r.best.min_pers), _fmt_float(r.mae),
                        _fmt_float(r.std), r.n_samples, r.calibration_split])


def emit_plot_data(rows, path) -> None:
    """Level-vs-MAE series, one row per (dataset, method, dim, level)."""
    rows = list(rows)
    if not rows:
        raise ValueError("empty report")
    level_index = {lvl: i for i, lvl in enumerate(LEVELS)}
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["dataset", "method", "dim", "level", "mae"])
        for r in sorted(rows, key=lambda r: (r.dataset, r.method, r.dim,
                                             level_index[r.noise_level])):
            w.writerow([r.dataset, r.method, r.dim,
                        level_index[r.noise_level], _fmt_float(r.mae)])
