"""Binary image containers, bit-exact I/O and combinatorial topology labels.

Images are plain 2D boolean numpy arrays (row-major, True = foreground).
Conventions used throughout: foreground connectivity is 8, background
connectivity is 4, and background regions touching the image border are
never holes.
"""

from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np
from PIL import Image
from scipy import ndimage


class LabelPair(NamedTuple):
    beta0: int
    beta1: int


STRUCT_4 = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
STRUCT_8 = np.ones((3, 3), dtype=bool)


def as_binary(arr) -> np.ndarray:
    """Validate and normalize an array to a 2D bool image."""
    a = np.asarray(arr)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected 2D image, got shape {a.shape}")
    return a.astype(bool)


def load_image(path) -> np.ndarray:
    """Load a binary image from PNG (8-bit gray, {0,255}) or ASCII PGM.

    Raises ValueError on any pixel value other than 0 or 255.
    """
    path = os.fspath(path)
    if path.endswith(".pgm"):
        arr = _load_pgm(path)
    else:
        with Image.open(path) as im:
            if im.mode not in ("L", "1"):
                raise ValueError(f"expected 8-bit grayscale image, got mode {im.mode}")
            arr = np.asarray(im.convert("L"), dtype=np.uint8)
    bad = np.setdiff1d(np.unique(arr), [0, 255])
    if bad.size:
        raise ValueError(f"non-binary pixel values {bad.tolist()} in {path}")
    return arr == 255


def save_image(img, path) -> None:
    """Write a binary image as 8-bit gray PNG or ASCII PGM ({0,255})."""
    img = as_binary(img)
    path = os.fspath(path)
    arr = np.where(img, 255, 0).astype(np.uint8)
    if path.endswith(".pgm"):
        _save_pgm(arr, path)
    else:
        Image.fromarray(arr, mode="L").save(path)


def _load_pgm(path) -> np.ndarray:
    with open(path) as f:
        tokens = []
        for line in f:
            line = line.split("#", 1)[0]
            tokens.extend(line.split())
    if not tokens or tokens[0] != "P2":
        raise ValueError(f"{path}: not an ASCII PGM (P2) file")
    w, h, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    if maxval != 255:
        raise ValueError(f"{path}: expected maxval 255, got {maxval}")
    vals = np.array(tokens[4:], dtype=np.int64)
    if vals.size != w * h:
        raise ValueError(f"{path}: expected {w * h} pixels, got {vals.size}")
    return vals.reshape(h, w).astype(np.uint8)


def _save_pgm(arr: np.ndarray, path) -> None:
    h, w = arr.shape
    with open(path, "w") as f:
        f.write(f"P2\n{w} {h}\n255\n")
        for row in arr:
            f.write(" ".join(str(int(v)) for v in row) + "\n")


def connected_components(img, connectivity: int = 8):
    """Label foreground components; returns (count, label grid).

    Labels are 1..count on foreground, 0 on background, assigned in
    deterministic raster-scan order.
    """
    img = as_binary(img)
    if connectivity == 4:
        struct = STRUCT_4
    elif connectivity == 8:
        struct = STRUCT_8
    else:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    labels, count = ndimage.label(img, structure=struct)
    return count, labels


def betti_labels(img) -> LabelPair:
    """Ground-truth (beta0, beta1) of a binary image.

    beta0 = 8-connected foreground components; beta1 = 4-connected
    background components not touching the image border.
    """
    img = as_binary(img)
    beta0, _ = connected_components(img, 8)
    n_bg, bg_labels = connected_components(~img, 4)
    border = np.zeros_like(img)
    border[0, :] = border[-1, :] = True
    border[:, 0] = border[:, -1] = True
    border_labels = np.unique(bg_labels[border & ~img])
    beta1 = n_bg - border_labels.size
    return LabelPair(int(beta0), int(beta1))


def euler_characteristic(img) -> int:
    """Euler characteristic V - E + F of the closure of foreground pixels.

    Each foreground pixel contributes a closed unit square; shared
    vertices/edges are counted once.
    """
    img = as_binary(img)
    h, w = img.shape
    pad = np.zeros((h + 2, w + 2), dtype=bool)
    pad[1:-1, 1:-1] = img
    faces = int(img.sum())
    # horizontal edges: (h+1, w) grid, present if either incident pixel is fg
    e_horiz = int((pad[:-1, 1:-1] | pad[1:, 1:-1]).sum())
    # vertical edges: (h, w+1) grid
    e_vert = int((pad[1:-1, :-1] | pad[1:-1, 1:]).sum())
    # vertices: (h+1, w+1) grid, present if any of the 4 incident pixels is fg
    verts = int(
        (pad[:-1, :-1] | pad[:-1, 1:] | pad[1:, :-1] | pad[1:, 1:]).sum()
    )
    return verts - (e_horiz + e_vert) + faces
