"""Betti number extraction from diagrams via the three-parameter window,
plus exhaustive grid-search calibration against ground-truth labels.

A pair is counted when its birth lies in [birth_lb, birth_ub] and its
lifespan strictly exceeds min_pers; essential pairs have infinite lifespan
and pass any threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagrams import PersistenceDiagram


@dataclass(frozen=True)
class WindowParams:
    birth_lb: float
    birth_ub: float
    min_pers: float

    def __post_init__(self):
        if self.min_pers < 0:
            raise ValueError("min_pers must be >= 0")


@dataclass(frozen=True)
class CalibrationGrid:
    birth_lb_axis: tuple
    birth_ub_axis: tuple
    min_pers_axis: tuple

    def __post_init__(self):
        for name in ("birth_lb_axis", "birth_ub_axis", "min_pers_axis"):
            ax = np.asarray(getattr(self, name), dtype=np.float64)
            if ax.size == 0:
                raise ValueError(f"{name} is empty")
            if np.any(np.diff(ax) <= 0):
                raise ValueError(f"{name} must be strictly increasing")
            object.__setattr__(self, name, tuple(ax.tolist()))

    @property
    def n_combinations(self) -> int:
        return (
            len(self.birth_lb_axis)
            * len(self.birth_ub_axis)
            * len(self.min_pers_axis)
        )


@dataclass(frozen=True)
class CalibrationResult:
    best: WindowParams
    mae: float
    std: float
    dataset_id: str = ""
    noise_level: str = ""
    dim: int = 0
    n_samples: int = 0
    calibration_split: str = ""


def count_window(diagram: PersistenceDiagram, params: WindowParams, dim: int) -> int:
    births, deaths = diagram.select(dim)
    life = deaths - births
    hit = (births >= params.birth_lb) & (births <= params.birth_ub) & (life > params.min_pers)
    return int(hit.sum())


def mae_std(preds, labels):
    """Mean absolute error and population std of the absolute errors."""
    preds = np.asarray(preds, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if preds.shape != labels.shape:
        raise ValueError(f"length mismatch: {preds.shape} vs {labels.shape}")
    if preds.size == 0:
        raise ValueError("empty input")
    err = np.abs(preds - labels)
    return float(err.mean()), float(err.std())


def _grid_error_sums(diagrams, targets, grid: CalibrationGrid, dim: int):
    """Accumulated sum |err| and sum err^2 per grid point, shape (lb, ub, mp)."""
    lb = np.asarray(grid.birth_lb_axis)
    ub = np.asarray(grid.birth_ub_axis)
    mp = np.asarray(grid.min_pers_axis)
    shape = (lb.size, ub.size, mp.size)
    sum_abs = np.zeros(shape)
    sum_sq = np.zeros(shape)
    for diagram, y in zip(diagrams, targets):
        births, deaths = diagram.select(dim)
        life = deaths - births
        in_lb = (births[None, :] >= lb[:, None]).astype(np.float64)
        in_ub = (births[None, :] <= ub[:, None]).astype(np.float64)
        in_mp = (life[None, :] > mp[:, None]).astype(np.float64)
        counts = np.einsum("ip,jp,kp->ijk", in_lb, in_ub, in_mp)
        err = np.abs(counts - y)
        sum_abs += err
        sum_sq += err * err
    return sum_abs, sum_sq


def calibrate(diagrams, labels, grid: CalibrationGrid, dim: int,
              dataset_id: str = "", noise_level: str = "",
              calibration_split: str = "") -> CalibrationResult:
    """Exhaustive grid search minimizing MAE against ground-truth labels.

    Ties resolve to the lexicographically smallest (birth_lb, birth_ub,
    min_pers), which is the first argmin in C order since axes increase.
    """
    diagrams = list(diagrams)
    labels = list(labels)
    if not diagrams:
        raise ValueError("empty input")
    if len(diagrams) != len(labels):
        raise ValueError("diagrams/labels length mismatch")
    targets = [lab[dim] for lab in labels]
    sum_abs, sum_sq = _grid_error_sums(diagrams, targets, grid, dim)
    n = len(diagrams)
    mae = sum_abs / n
    flat = int(np.argmin(mae))
    i, j, k = np.unravel_index(flat, mae.shape)
    best_mae = float(mae[i, j, k])
    var = float(sum_sq[i, j, k] / n - best_mae**2)
    std = float(np.sqrt(max(var, 0.0)))
    best = WindowParams(
        grid.birth_lb_axis[i], grid.birth_ub_axis[j], grid.min_pers_axis[k]
    )
    return CalibrationResult(best, best_mae, std, dataset_id, noise_level,
                             dim, n, calibration_split)


def _axis(lo: float, hi: float, n: int):
    if lo == hi:
        return (float(lo),)
    return tuple(np.linspace(lo, hi, n).tolist())


def default_grid(diagrams, n: int = 25, dim: int | None = None) -> CalibrationGrid:
    """Data-driven axes: births span their [p1, p99] percentiles, min_pers
    spans [0, p99] of finite lifespans; n evenly spaced values per axis
    (collapsed when degenerate).

    `dim` restricts the statistics to one homology dimension.
    """
    births, lives = [], []
    for d in diagrams:
        if dim is None:
            b, dth = d.births, d.deaths
        else:
            b, dth = d.select(dim)
        births.append(b)
        life = dth - b
        lives.append(life[np.isfinite(life)])
    births = np.concatenate(births) if births else np.empty(0)
    lives = np.concatenate(lives) if lives else np.empty(0)
    if births.size == 0:
        raise ValueError("no pairs to build a grid from")
    b_lo, b_hi = np.percentile(births, [1, 99])
    l_hi = float(np.percentile(lives, 99)) if lives.size else 0.0
    return CalibrationGrid(
        _axis(float(b_lo), float(b_hi), n),
        _axis(float(b_lo), float(b_hi), n),
        _axis(0.0, l_hi, n),
    )


def quantile_grid(diagrams, n: int = 25, dim: int | None = None) -> CalibrationGrid:
    """Like `default_grid` but axis values snap to observed data values
    (quantiles of the unique births / lifespans), so integer-valued
    landmarks such as a birth bound of -1 are reachable by the search."""
    births, lives = [], []
    for d in diagrams:
        if dim is None:
            b, dth = d.births, d.deaths
        else:
            b, dth = d.select(dim)
        births.append(b)
        life = dth - b
        lives.append(life[np.isfinite(life)])
    births = np.concatenate(births) if births else np.empty(0)
    lives = np.concatenate(lives) if lives else np.empty(0)
    if births.size == 0:
        # no features observed: any window counting zero is optimal
        return CalibrationGrid((0.0,), (0.0,), (0.0,))
    # -1 is the largest foreground value of any signed squared-distance
    # field; a birth bound there isolates features of the closed foreground
    b_land = [-1.0] if births.min() <= -1.0 <= births.max() else []
    b_ax = _data_axis(births, n, b_land)
    l_ax = _data_axis(lives, n, [0.0]) if lives.size else np.array([0.0])
    return CalibrationGrid(tuple(b_ax), tuple(b_ax), tuple(l_ax))


def _data_axis(values: np.ndarray, n: int, landmarks) -> np.ndarray:
    """Axis of observed values: all distinct values when there are at most
    n of them, frequency-weighted quantiles otherwise."""
    uniq = np.unique(values)
    if uniq.size + len(landmarks) <= n:
        ax = uniq
    else:
        # dense coverage of the smallest distinct values (where the
        # noise/structure cut lives), rank-spaced samples over the rest
        head = uniq[: n // 2]
        tail_idx = np.linspace(n // 2, uniq.size - 1, n - n // 2).astype(int)
        ax = np.concatenate([head, uniq[tail_idx]])
    return np.unique(np.concatenate([ax, np.asarray(landmarks, dtype=np.float64)]))
