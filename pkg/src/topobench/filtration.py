"""Sublevel cubical filtration and the boundary-matrix persistence oracle.

Pixels are top (2-)cells; every lower cell takes the minimum value of the
pixels whose closure contains it, so the sublevel set of a threshold is the
closure of the pixels at or below it (8-connected foreground behavior).

`persistence_reduce` is the slow, always-correct reference: standard GF(2)
boundary reduction in filtration order with the twist (clear paired edge
columns while reducing the 2-cells first). It is shipped, not test-only,
so downstream sanity modes can reuse it.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .diagrams import PersistenceDiagram, from_pairs

# cell kinds; the numeric order is the deterministic tie-break within a dim
VERTEX, HEDGE, VEDGE, FACE = 0, 1, 2, 3
_DIM = {VERTEX: 0, HEDGE: 1, VEDGE: 1, FACE: 2}


class Cell(NamedTuple):
    value: int
    dim: int
    y: int
    x: int
    kind: int


def _cell_values(field: np.ndarray):
    """Min-of-incident-pixels values for vertices and edges."""
    h, w = field.shape
    big = np.iinfo(np.int64).max
    pad = np.full((h + 2, w + 2), big, dtype=np.int64)
    pad[1:-1, 1:-1] = field
    vert = np.minimum.reduce(
        [pad[:-1, :-1], pad[:-1, 1:], pad[1:, :-1], pad[1:, 1:]]
    )
    hedge = np.minimum(pad[:-1, 1:-1], pad[1:, 1:-1])
    vedge = np.minimum(pad[1:-1, :-1], pad[1:-1, 1:])
    return vert, hedge, vedge


def build_filtration(field) -> list[Cell]:
    """All cells of the cubical complex sorted by (value, dim, anchor).

    Counts are (h+1)(w+1) vertices, w(h+1) + h(w+1) edges, and h*w faces.
    """
    field = np.asarray(field, dtype=np.int64)
    h, w = field.shape
    vert, hedge, vedge = _cell_values(field)
    cells = []
    for i in range(h + 1):
        for j in range(w + 1):
            cells.append(Cell(int(vert[i, j]), 0, i, j, VERTEX))
    for i in range(h + 1):
        for j in range(w):
            cells.append(Cell(int(hedge[i, j]), 1, i, j, HEDGE))
    for i in range(h):
        for j in range(w + 1):
            cells.append(Cell(int(vedge[i, j]), 1, i, j, VEDGE))
    for i in range(h):
        for j in range(w):
            cells.append(Cell(int(field[i, j]), 2, i, j, FACE))
    cells.sort(key=lambda c: (c.value, c.dim, c.y, c.x, c.kind))
    return cells


def persistence_reduce(field, image_id: str = "") -> PersistenceDiagram:
    """H0/H1 persistence of the sublevel filtration by boundary reduction.

    Columns are GF(2) bitmasks (Python ints) over filtration positions;
    dimension-2 columns are reduced first and their paired edges cleared.
    Zero-persistence pairs are dropped at the source.
    """
    field = np.asarray(field, dtype=np.int64)
    if field.ndim != 2 or min(field.shape) < 1:
        raise ValueError(f"expected a 2D field, got shape {field.shape}")
    cells = build_filtration(field)
    pos = {(c.kind, c.y, c.x): p for p, c in enumerate(cells)}

    def edge_boundary(c: Cell) -> int:
        if c.kind == HEDGE:
            a = pos[(VERTEX, c.y, c.x)]
            b = pos[(VERTEX, c.y, c.x + 1)]
        else:
            a = pos[(VERTEX, c.y, c.x)]
            b = pos[(VERTEX, c.y + 1, c.x)]
        return (1 << a) | (1 << b)

    def face_boundary(c: Cell) -> int:
        return (
            (1 << pos[(HEDGE, c.y, c.x)])
            ^ (1 << pos[(HEDGE, c.y + 1, c.x)])
            ^ (1 << pos[(VEDGE, c.y, c.x)])
            ^ (1 << pos[(VEDGE, c.y, c.x + 1)])
        )

    pairs = []
    cleared = set()

    # dim 2 first (twist): pairs are (edge birth, face death)
    lookup: dict[int, int] = {}  # low row position -> reduced column
    for p, c in enumerate(cells):
        if c.dim != 2:
            continue
        col = face_boundary(c)
        while col:
            low = col.bit_length() - 1
            if low not in lookup:
                break
            col ^= lookup[low]
        if not col:
            raise AssertionError("2-cycle in a 2D cubical complex")
        low = col.bit_length() - 1
        lookup[low] = col
        cleared.add(low)
        birth = cells[low].value
        if c.value > birth:
            pairs.append((1, birth, c.value))

    # dim 1: pairs are (vertex birth, edge death)
    lookup = {}
    paired_vertices = set()
    for p, c in enumerate(cells):
        if c.dim != 1 or p in cleared:
            continue
        col = edge_boundary(c)
        while col:
            low = col.bit_length() - 1
            if low not in lookup:
                break
            col ^= lookup[low]
        if not col:
            raise AssertionError("essential 1-cycle on a full rectangle")
        low = col.bit_length() - 1
        lookup[low] = col
        paired_vertices.add(low)
        birth = cells[low].value
        if c.value > birth:
            pairs.append((0, birth, c.value))

    essentials = [
        p for p, c in enumerate(cells) if c.dim == 0 and p not in paired_vertices
    ]
    if len(essentials) != 1:
        raise AssertionError(f"expected one essential class, got {len(essentials)}")
    pairs.append((0, cells[essentials[0]].value, float("inf")))
    return from_pairs(image_id, pairs)
