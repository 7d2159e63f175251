"""Grayscale-to-binary preprocessing: Otsu threshold, morphological
open/close with a Euclidean disk, and pore inversion.

The full pipeline is threshold -> open -> close -> invert, so the output
foreground is the pore space.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import binary_dilation, binary_erosion

from .raster import as_binary

DISK_RADIUS = 3


def disk(radius: int = DISK_RADIUS) -> np.ndarray:
    """Discrete Euclidean disk {(dy, dx): dy^2 + dx^2 <= radius^2}."""
    r = int(radius)
    y, x = np.mgrid[-r:r + 1, -r:r + 1]
    return (y * y + x * x) <= r * r


def _as_gray(img) -> np.ndarray:
    a = np.asarray(img)
    if a.ndim != 2:
        raise ValueError(f"expected 2D grayscale image, got shape {a.shape}")
    if a.dtype != np.uint8:
        if a.min() < 0 or a.max() > 255:
            raise ValueError("intensities must lie in [0, 255]")
        a = a.astype(np.uint8)
    return a


def otsu_threshold(img) -> int:
    """Threshold maximizing between-class variance over the 256-bin
    histogram; smallest maximizer on ties. Pixels > threshold are
    foreground."""
    img = _as_gray(img)
    hist = np.bincount(img.ravel(), minlength=256).astype(np.float64)
    if np.count_nonzero(hist) < 2:
        raise ValueError("constant image has no Otsu threshold")
    total = hist.sum()
    levels = np.arange(256, dtype=np.float64)
    w0 = np.cumsum(hist)  # class {0..t}
    m0 = np.cumsum(hist * levels)
    mean_total = m0[-1]
    w1 = total - w0
    valid = (w0 > 0) & (w1 > 0)
    var = np.zeros(256)
    mu0 = np.where(w0 > 0, m0 / np.maximum(w0, 1), 0.0)
    mu1 = np.where(w1 > 0, (mean_total - m0) / np.maximum(w1, 1), 0.0)
    var[valid] = (w0 * w1)[valid] * (mu0 - mu1)[valid] ** 2
    return int(var.argmax())  # argmax returns the smallest tie


def morph_open(img, radius: int = DISK_RADIUS) -> np.ndarray:
    """Erosion then dilation; border treated as background, so border
    foreground can erode away."""
    img = as_binary(img)
    s = disk(radius)
    return binary_dilation(binary_erosion(img, s, border_value=0), s, border_value=0)


def morph_close(img, radius: int = DISK_RADIUS) -> np.ndarray:
    """Dilation then erosion with background padding.

    Padded by the disk radius so the dilation is never clipped at the
    border; closing therefore never removes foreground pixels."""
    img = as_binary(img)
    s = disk(radius)
    r = int(radius)
    padded = np.pad(img, r, constant_values=False)
    closed = binary_erosion(binary_dilation(padded, s, border_value=0), s,
                            border_value=0)
    return closed[r:-r, r:-r]


def binarize_clean(img, radius: int = DISK_RADIUS) -> np.ndarray:
    """threshold -> open -> close -> invert; pores become foreground."""
    img = _as_gray(img)
    t = otsu_threshold(img)
    solid = img > t
    solid = morph_open(solid, radius)
    solid = morph_close(solid, radius)
    return ~solid
