"""Synthetic wall-network dataset with controlled topology.

Random points are clustered with k-means; walls are drawn along the
perpendicular bisector between each pixel's two nearest same-cluster
sites, with a Perlin-modulated local thickness.
An erosion band along cluster-territory boundaries keeps clusters
disconnected so the component count tracks k. Ground-truth labels are
computed from the raster before any noise is applied, and samples are
rejection-resampled into the target label ranges (beta0 1-5, beta1 0-50).
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import binary_dilation

from .manifest import ManifestRecord, write_manifest
from .noise import perlin
from .raster import LabelPair, betti_labels, save_image

BETA0_RANGE = (1, 5)
BETA1_RANGE = (0, 50)


@dataclass(frozen=True)
class SynthConfig:
    image_size: int = 512
    k_clusters: tuple = (1, 5)
    sites_per_cluster: tuple = (6, 20)
    wall_thickness: tuple = (2.0, 3.0)
    perlin_scale: float = 0.005
    lloyd_iters: int = 10
    seed: int = 0
    max_retries: int = 100

    def __post_init__(self):
        if self.image_size < 32:
            raise ValueError("image_size must be >= 32")
        if min(self.wall_thickness) <= 0:
            raise ValueError("wall thickness must be positive")
        if not (1 <= self.k_clusters[0] <= self.k_clusters[1] <= 5):
            raise ValueError("k_clusters range must lie within [1, 5]")


def lloyd_kmeans(points, k: int, iters: int, seed: int):
    """Standard Lloyd iterations from seeded random-point initialization.

    Empty clusters are re-seeded from the point farthest from its
    centroid. Returns (centroids, assignment).
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] == 0:
        raise ValueError("points must be a non-empty (n, 2) array")
    n = points.shape[0]
    if k < 1 or k > n:
        raise ValueError(f"k={k} out of range for {n} points")
    rng = np.random.default_rng(seed)
    centroids = points[rng.choice(n, size=k, replace=False)].copy()

    def assign(cent):
        d2 = ((points[:, None, :] - cent[None, :, :]) ** 2).sum(axis=2)
        return d2.argmin(axis=1), d2

    assignment, d2 = assign(centroids)
    for _ in range(iters):
        for c in range(k):
            members = points[assignment == c]
            if members.shape[0] == 0:
                far = d2[np.arange(n), assignment].argmax()
                centroids[c] = points[far]
            else:
                centroids[c] = members.mean(axis=0)
        assignment, d2 = assign(centroids)
    return centroids, assignment


def rasterize_walls(sites, cluster_of, thickness_field, size: int) -> np.ndarray:
    """Wall raster: pixel is foreground iff its perpendicular distance to
    the bisector of its two nearest same-cluster sites is at most half the
    local thickness. Single-site territories yield no walls; a 2-pixel
    band at territory boundaries is cleared."""
    sites = np.asarray(sites, dtype=np.float64)
    cluster_of = np.asarray(cluster_of)
    if sites.shape[0] < 1:
        raise ValueError("need at least one site")
    thickness = np.asarray(thickness_field, dtype=np.float64)
    k = int(cluster_of.max()) + 1
    centroids = np.stack([
        sites[cluster_of == c].mean(axis=0) if (cluster_of == c).any()
        else np.array([np.inf, np.inf])
        for c in range(k)
    ])
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    dc = (
        (yy[:, :, None] - centroids[:, 0]) ** 2
        + (xx[:, :, None] - centroids[:, 1]) ** 2
    )
    territory = dc.argmin(axis=2)

    fg = np.zeros((size, size), dtype=bool)
    for c in range(k):
        sc = sites[cluster_of == c]
        if sc.shape[0] < 2:
            continue
        py, px = np.nonzero(territory == c)
        if py.size == 0:
            continue
        d2 = (py[:, None] - sc[:, 0]) ** 2 + (px[:, None] - sc[:, 1]) ** 2
        near = np.argpartition(d2, 1, axis=1)[:, :2]
        rows = np.arange(py.size)
        a, b = near[:, 0], near[:, 1]
        da2 = d2[rows, a]
        db2 = d2[rows, b]
        ab = np.maximum(
            np.sqrt(((sc[a] - sc[b]) ** 2).sum(axis=1)), 1e-9
        )
        # perpendicular distance to the bisector of the two nearest sites;
        # constant wall width, unlike the raw d2-d1 gap which blows up far
        # from the site pair
        bis = np.abs(db2 - da2) / (2.0 * ab)
        fg[py, px] = bis <= thickness[py, px] / 2.0

    if k > 1:
        edge = np.zeros((size, size), dtype=bool)
        edge[:-1, :] |= territory[:-1, :] != territory[1:, :]
        edge[1:, :] |= territory[:-1, :] != territory[1:, :]
        edge[:, :-1] |= territory[:, :-1] != territory[:, 1:]
        edge[:, 1:] |= territory[:, :-1] != territory[:, 1:]
        band = binary_dilation(edge, structure=_disk(2))
        fg &= ~band
    return fg


def _disk(radius: int) -> np.ndarray:
    r = int(radius)
    y, x = np.mgrid[-r:r + 1, -r:r + 1]
    return (y * y + x * x) <= r * r


def _draw_sample(cfg: SynthConfig, seed: int):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(cfg.k_clusters[0], cfg.k_clusters[1] + 1))
    per = rng.integers(cfg.sites_per_cluster[0], cfg.sites_per_cluster[1] + 1,
                       size=k)
    n_points = int(per.sum())
    points = rng.uniform(0, cfg.image_size, size=(n_points, 2))
    _, assignment = lloyd_kmeans(points, k, cfg.lloyd_iters,
                                 int(rng.integers(2**63)))
    t_lo, t_hi = cfg.wall_thickness
    thickness = t_lo + (t_hi - t_lo) * perlin(
        cfg.image_size, cfg.image_size, cfg.perlin_scale,
        int(rng.integers(2**63))
    )
    img = rasterize_walls(points, assignment, thickness, cfg.image_size)
    return img, betti_labels(img)


def generate_sample(cfg: SynthConfig, sample_seed: int):
    """One accepted (image, labels) pair; rejection-resamples with derived
    seeds until labels land in the target ranges."""
    for attempt in range(cfg.max_retries):
        img, labels = _draw_sample(
            cfg, int(np.random.SeedSequence([sample_seed, attempt]).generate_state(1)[0])
        )
        if (BETA0_RANGE[0] <= labels.beta0 <= BETA0_RANGE[1]
                and BETA1_RANGE[0] <= labels.beta1 <= BETA1_RANGE[1]):
            return img, labels
    raise RuntimeError(
        f"retry budget exhausted for seed {sample_seed}; check SynthConfig"
    )


def sample_id(index: int) -> str:
    return f"vor{index:05d}"


def generate_dataset(cfg: SynthConfig, n: int, out_dir):
    """Write n samples (images/, labels.csv, manifest.jsonl); per-sample
    seeds are cfg.seed XOR index. Returns the manifest records."""
    out_dir = os.fspath(out_dir)
    img_dir = os.path.join(out_dir, "images")
    os.makedirs(img_dir, exist_ok=True)
    records = []
    rows = []
    for i in range(n):
        seed = cfg.seed ^ i
        img, labels = generate_sample(cfg, seed)
        sid = sample_id(i)
        rel = os.path.join("images", sid + ".png")
        save_image(img, os.path.join(out_dir, rel))
        rows.append((sid, labels.beta0, labels.beta1))
        records.append(ManifestRecord(
            id=sid, image_path=rel, dataset="voronoi", split="",
            noise_level="N0", clean_id=sid, beta0=labels.beta0,
            beta1=labels.beta1, seed=seed,
        ))
    with open(os.path.join(out_dir, "labels.csv"), "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["id", "beta0", "beta1"])
        writer.writerows(rows)
    write_manifest(records, os.path.join(out_dir, "manifest.jsonl"))
    return records


def load_labels(path) -> dict[str, LabelPair]:
    out = {}
    with open(path) as f:
        for row in csv.DictReader(f):
            out[row["id"]] = LabelPair(int(row["beta0"]), int(row["beta1"]))
    return out
