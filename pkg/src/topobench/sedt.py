"""Exact signed squared Euclidean distance transform.

All distances are squared and kept as int64, so every value is exact and
bit-identical across platforms. The sign is carried separately: negative
inside foreground, positive on background, never zero. A reporting-only
`signed_sqrt` converts to linear units for display.
"""

from __future__ import annotations

import struct

import numpy as np
from numba import njit

from .raster import as_binary

_INF = np.int64(1) << 40  # internal only; above any real w^2 + h^2


@njit(cache=True)
def _edt_columns(mask, out):
    """Per-column 1D distance (linear, not squared) to nearest True pixel."""
    h, w = mask.shape
    for x in range(w):
        d = _INF
        for y in range(h):
            if mask[y, x]:
                d = 0
            elif d < _INF:
                d += 1
            out[y, x] = d
        d = _INF
        for y in range(h - 1, -1, -1):
            if mask[y, x]:
                d = 0
            elif d < _INF:
                d += 1
            if d < out[y, x]:
                out[y, x] = d


@njit(cache=True)
def _edt_rows(g, out):
    """Lower envelope of parabolas along each row (squared distances)."""
    h, w = g.shape
    v = np.empty(w, dtype=np.int64)  # parabola anchors
    z = np.empty(w + 1, dtype=np.float64)  # envelope boundaries
    f = np.empty(w, dtype=np.int64)
    for y in range(h):
        for x in range(w):
            gv = g[y, x]
            if gv < _INF:
                f[x] = gv * gv
            else:
                f[x] = _INF
        k = 0
        v[0] = 0
        z[0] = -1e30
        z[1] = 1e30
        for q in range(1, w):
            fq = f[q] + q * q
            p = v[k]
            s = (fq - (f[p] + p * p)) / (2.0 * (q - p))
            while s <= z[k]:
                k -= 1
                p = v[k]
                s = (fq - (f[p] + p * p)) / (2.0 * (q - p))
            k += 1
            v[k] = q
            z[k] = s
            z[k + 1] = 1e30
        k = 0
        for q in range(w):
            while z[k + 1] < q:
                k += 1
            p = v[k]
            d = q - p
            val = f[p] + d * d
            out[y, q] = val if val < _INF else _INF


def edt_squared(img, target_phase: str = "foreground") -> np.ndarray:
    """Exact squared Euclidean distance to the nearest target-phase pixel.

    Returns an int64 grid; the sentinel (w+h)^2 everywhere when the target
    phase is empty.
    """
    img = as_binary(img)
    if target_phase == "foreground":
        mask = img
    elif target_phase == "background":
        mask = ~img
    else:
        raise ValueError(f"unknown target phase {target_phase!r}")
    h, w = img.shape
    sentinel = np.int64(w + h) ** 2
    if not mask.any():
        return np.full((h, w), sentinel, dtype=np.int64)
    g = np.empty((h, w), dtype=np.int64)
    _edt_columns(mask, g)
    out = np.empty((h, w), dtype=np.int64)
    _edt_rows(g, out)
    return out


def sedt(img) -> np.ndarray:
    """Signed squared EDT: -d^2 to background on foreground, +d^2 to
    foreground on background."""
    img = as_binary(img)
    to_bg = edt_squared(img, "background")
    to_fg = edt_squared(img, "foreground")
    return np.where(img, -to_bg, to_fg)


def signed_sqrt(field) -> np.ndarray:
    """Reporting-only conversion to linear distance units: sign * sqrt|v|."""
    field = np.asarray(field)
    return np.sign(field) * np.sqrt(np.abs(field).astype(np.float64))


_MAGIC = b"SFLD\x00\x00\x00\x01"


def save_field(field, path) -> None:
    """Binary dump: 16-byte header (magic, u32 width, u32 height) then
    little-endian int64 values, row-major."""
    field = np.ascontiguousarray(field, dtype=np.int64)
    h, w = field.shape
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<II", w, h))
        f.write(field.astype("<i8").tobytes())


def load_field(path) -> np.ndarray:
    with open(path, "rb") as f:
        magic = f.read(8)
        if magic != _MAGIC:
            raise ValueError(f"{path}: bad magic")
        w, h = struct.unpack("<II", f.read(8))
        data = np.frombuffer(f.read(), dtype="<i8")
    if data.size != w * h:
        raise ValueError(f"{path}: expected {w * h} values, got {data.size}")
    return data.reshape(h, w).astype(np.int64)


def save_field_csv(field, path) -> None:
    np.savetxt(path, np.asarray(field, dtype=np.int64), fmt="%d", delimiter=",")
