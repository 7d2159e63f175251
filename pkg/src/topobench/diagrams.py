"""Persistence diagram container and CSV serialization.

Diagrams are multisets of (dim, birth, death) with death possibly +inf.
Values coming from SEDT filtrations are integers, carried as float64 so
that infinity has a natural encoding.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class PersistenceDiagram:
    image_id: str
    dims: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int8))
    births: np.ndarray = field(default_factory=lambda: np.empty(0))
    deaths: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        object.__setattr__(self, "dims", np.asarray(self.dims, dtype=np.int8))
        object.__setattr__(self, "births", np.asarray(self.births, dtype=np.float64))
        object.__setattr__(self, "deaths", np.asarray(self.deaths, dtype=np.float64))
        if not (self.dims.size == self.births.size == self.deaths.size):
            raise ValueError("dims/births/deaths length mismatch")

    def __len__(self):
        return self.dims.size

    def select(self, dim: int):
        """(births, deaths) arrays of the given homology dimension."""
        m = self.dims == dim
        return self.births[m], self.deaths[m]

    def multiset(self, dim: int | None = None) -> Counter:
        """Pair multiset; keys are (dim, birth, death), or (birth, death)
        when restricted to one dimension."""
        if dim is None:
            return Counter(
                (int(d), float(b), float(dth))
                for d, b, dth in zip(self.dims, self.births, self.deaths)
            )
        births, deaths = self.select(dim)
        return Counter(zip(births.tolist(), deaths.tolist()))

    def same_pairs(self, other: "PersistenceDiagram") -> bool:
        """Order-independent multiset equality."""
        return self.multiset() == other.multiset()


def from_pairs(image_id: str, pairs) -> PersistenceDiagram:
    """Build a diagram from an iterable of (dim, birth, death) tuples."""
    pairs = list(pairs)
    dims = [p[0] for p in pairs]
    births = [p[1] for p in pairs]
    deaths = [p[2] for p in pairs]
    return PersistenceDiagram(image_id, np.array(dims, dtype=np.int8),
                              np.array(births), np.array(deaths))


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "inf"
    if float(v).is_integer():
        return str(int(v))
    return repr(float(v))


def save_diagram_csv(diagram: PersistenceDiagram, path) -> None:
    """Write `dim,birth,death` rows, death `inf` for essential pairs."""
    with open(path, "w") as f:
        f.write("dim,birth,death\n")
        for d, b, dth in zip(diagram.dims, diagram.births, diagram.deaths):
            f.write(f"{int(d)},{_fmt(b)},{_fmt(dth)}\n")


def load_diagram_csv(path, image_id: str | None = None) -> PersistenceDiagram:
    import os

    if image_id is None:
        image_id = os.path.basename(os.fspath(path)).removesuffix(".pd.csv")
    dims, births, deaths = [], [], []
    with open(path) as f:
        header = f.readline().strip()
        if header != "dim,birth,death":
            raise ValueError(f"{path}: bad diagram header {header!r}")
        for line in f:
            d, b, dth = line.strip().split(",")
            dims.append(int(d))
            births.append(float(b))
            deaths.append(float(dth))
    return PersistenceDiagram(image_id, np.array(dims, dtype=np.int8),
                              np.array(births), np.array(deaths))
