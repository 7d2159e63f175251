"""Five-level noise protocol (N0-N4) over clean binary images.

All operators are pure functions of (inputs, seed). `apply_level` derives
one sub-seed per stage from the variant seed, so a single seed in the
manifest reproduces the whole corrupted image.

Profiles: `voronoi` uses Gaussian blur with a Perlin-modulated
re-binarization threshold; `deepore-like` / `cem-like` use edge peeling,
thresholded-Gaussian pixel flips (subtractive then additive) and a Perlin
mask (subtractive), in that order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy.ndimage import binary_dilation, convolve1d

from .raster import STRUCT_4, as_binary

LEVELS = ("N0", "N1", "N2", "N3", "N4")
PROFILES = ("voronoi", "deepore-like", "cem-like")


@dataclass(frozen=True)
class NoisePreset:
    level: str
    profile: str
    peel_passes: int | None = None
    peel_prob: float | None = None
    gauss_mean: float | None = None
    gauss_sigma: float | None = None
    perlin_scale: float | None = None
    perlin_threshold: float | None = None


def _parse_presets(text: str) -> dict:
    table = {}
    for row in csv.DictReader(text.splitlines()):
        def opt(key, conv):
            return conv(row[key]) if row[key] != "" else None

        preset = NoisePreset(
            level=row["level"],
            profile=row["profile"],
            peel_passes=opt("peel_passes", int),
            peel_prob=opt("peel_prob", float),
            gauss_mean=opt("gauss_mean", float),
            gauss_sigma=opt("gauss_sigma", float),
            perlin_scale=opt("perlin_scale", float),
            perlin_threshold=opt("perlin_threshold", float),
        )
        table[(preset.profile, preset.level)] = preset
    return table


def load_presets(path=None) -> dict:
    """Preset table keyed by (profile, level); the shipped file mirrors the
    per-dataset noise configuration, N0 being the identity."""
    if path is None:
        text = resources.files("topobench").joinpath("data/presets.csv").read_text()
    else:
        with open(path) as f:
            text = f.read()
    return _parse_presets(text)


def get_preset(profile: str, level: str) -> NoisePreset:
    table = load_presets()
    key = (profile, level)
    if key not in table:
        raise ValueError(f"unknown preset {profile}/{level}")
    return table[key]


# 8 lattice gradient directions (classic style, diagonals normalized)
_S = 1.0 / math.sqrt(2.0)
_GRADS = np.array([
    (1, 0), (-1, 0), (0, 1), (0, -1),
    (_S, _S), (-_S, _S), (_S, -_S), (-_S, -_S),
])


def _fade(t):
    return t * t * t * (t * (t * 6 - 15) + 10)


def perlin(width: int, height: int, scale: float, seed: int) -> np.ndarray:
    """Classic lattice-gradient noise, renormalized to [0, 1].

    `scale` is in lattice cycles per pixel; deterministic given seed.
    """
    if scale <= 0:
        raise ValueError("scale must be > 0")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(256)
    perm = np.concatenate([perm, perm])

    xs = np.arange(width) * scale
    ys = np.arange(height) * scale
    X, Y = np.meshgrid(xs, ys)
    x0 = np.floor(X).astype(np.int64)
    y0 = np.floor(Y).astype(np.int64)
    fx = X - x0
    fy = Y - y0

    def grad_dot(ix, iy, dx, dy):
        h = perm[perm[ix & 255] + (iy & 255)] & 7
        g = _GRADS[h]
        return g[..., 0] * dx + g[..., 1] * dy

    n00 = grad_dot(x0, y0, fx, fy)
    n10 = grad_dot(x0 + 1, y0, fx - 1, fy)
    n01 = grad_dot(x0, y0 + 1, fx, fy - 1)
    n11 = grad_dot(x0 + 1, y0 + 1, fx - 1, fy - 1)
    u = _fade(fx)
    v = _fade(fy)
    nx0 = n00 + u * (n10 - n00)
    nx1 = n01 + u * (n11 - n01)
    out = nx0 + v * (nx1 - nx0)

    lo, hi = out.min(), out.max()
    if hi == lo:
        return np.full((height, width), 0.5)
    return (out - lo) / (hi - lo)


def edge_peel(img, passes: int, p: float, seed: int) -> np.ndarray:
    """Randomly clear foreground pixels 4-adjacent to background,
    `passes` times with per-pixel probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    img = as_binary(img).copy()
    rng = np.random.default_rng(seed)
    for _ in range(passes):
        interior = ~binary_dilation(~img, structure=STRUCT_4, border_value=0)
        boundary = img & ~interior
        img &= ~(boundary & (rng.random(img.shape) < p))
    return img


def gaussian_flip(img, mean: float, sigma: float, polarity: str, seed: int) -> np.ndarray:
    """Thresholded-Gaussian pixel flips: i.i.d. g ~ N(mean, sigma); additive
    turns background pixels with g > 0 into foreground, subtractive clears
    foreground pixels with g > 0."""
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    img = as_binary(img)
    rng = np.random.default_rng(seed)
    g = rng.normal(mean, sigma, size=img.shape)
    flip = g > 0
    if polarity == "additive":
        return img | (flip & ~img)
    if polarity == "subtractive":
        return img & ~(flip & img)
    raise ValueError(f"unknown polarity {polarity!r}")


def perlin_mask_noise(img, scale: float, threshold: float, polarity: str,
                      seed: int) -> np.ndarray:
    """Set (additive) or clear (subtractive) pixels where the Perlin field
    exceeds `threshold`."""
    img = as_binary(img)
    h, w = img.shape
    mask = perlin(w, h, scale, seed) > threshold
    if polarity == "additive":
        return img | mask
    if polarity == "subtractive":
        return img & ~mask
    raise ValueError(f"unknown polarity {polarity!r}")


def _gauss_kernel(sigma: float) -> np.ndarray:
    radius = math.ceil(3 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2 * sigma * sigma))
    return k / k.sum()


def blur_rethreshold(img, sigma: float, threshold_field) -> np.ndarray:
    """Gaussian blur of the {0,1} lift, re-binarized against a spatially
    varying threshold. Kernel is truncated at radius ceil(3*sigma) and
    renormalized; the blurred field is rescaled by its maximum so thin
    structures degrade gradually instead of vanishing outright once sigma
    exceeds their width."""
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    img = as_binary(img)
    k = _gauss_kernel(sigma)
    real = img.astype(np.float64)
    real = convolve1d(real, k, axis=0, mode="reflect")
    real = convolve1d(real, k, axis=1, mode="reflect")
    peak = real.max()
    if peak > 0:
        real = real / peak
    return real > np.asarray(threshold_field)


def perlin_threshold_field(width: int, height: int, scale: float,
                           seed: int) -> np.ndarray:
    """Re-binarization threshold: 0.5 + 0.3 * (perlin - 0.5)."""
    return 0.5 + 0.3 * (perlin(width, height, scale, seed) - 0.5)


def apply_level(img, preset: NoisePreset, seed: int) -> np.ndarray:
    """Apply one noise level. N0 is the identity; stage sub-seeds are
    derived from (seed, stage index) so the whole variant reproduces from
    one seed."""
    img = as_binary(img)
    if preset.level == "N0":
        return img.copy()
    if preset.profile == "voronoi":
        h, w = img.shape
        theta = perlin_threshold_field(
            w, h, preset.perlin_scale, _seed_int(seed, 0)
        )
        return blur_rethreshold(img, preset.gauss_sigma, theta)
    if preset.profile in ("deepore-like", "cem-like"):
        out = edge_peel(img, preset.peel_passes, preset.peel_prob,
                        _seed_int(seed, 0))
        out = gaussian_flip(out, preset.gauss_mean, preset.gauss_sigma,
                            "subtractive", _seed_int(seed, 1))
        out = gaussian_flip(out, preset.gauss_mean, preset.gauss_sigma,
                            "additive", _seed_int(seed, 2))
        out = perlin_mask_noise(out, preset.perlin_scale,
                                preset.perlin_threshold, "subtractive",
                                _seed_int(seed, 3))
        return out
    raise ValueError(f"unknown profile {preset.profile!r}")


def _seed_int(seed: int, stage: int) -> int:
    # stable 64-bit mix of (seed, stage); SeedSequence keeps it well spread
    return int(np.random.SeedSequence([seed, stage]).generate_state(1)[0])
