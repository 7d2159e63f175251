import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topobench.diagrams import from_pairs
from topobench.windowing import (CalibrationGrid, WindowParams, calibrate,
                                 count_window, default_grid, mae_std,
                                 quantile_grid)

from oracles import brute_calibrate

INF = np.inf


def _diag(pairs):
    return from_pairs("d", pairs)


def test_count_window_basic():
    d = _diag([(0, -4.0, INF), (0, -4.0, -2.0), (0, -1.0, 0.5), (1, -1.0, 3.0)])
    p = WindowParams(-5.0, -1.0, 1.6)
    assert count_window(d, p, 0) == 2  # essential + (-4,-2); (-1,0.5) too short
    assert count_window(d, p, 1) == 1


def test_essential_passes_any_threshold():
    d = _diag([(0, -4.0, INF)])
    assert count_window(d, WindowParams(-10.0, 0.0, 1e9), 0) == 1


def test_min_pers_is_strict():
    d = _diag([(0, -3.0, -1.0)])
    assert count_window(d, WindowParams(-5.0, 0.0, 2.0), 0) == 0
    assert count_window(d, WindowParams(-5.0, 0.0, 1.9), 0) == 1


def test_birth_bounds_inclusive():
    d = _diag([(0, -2.0, 5.0)])
    assert count_window(d, WindowParams(-2.0, -2.0, 0.0), 0) == 1


def test_mae_std():
    mae, std = mae_std([1, 2, 5], [1, 4, 1])
    err = np.array([0.0, 2.0, 4.0])
    assert mae == err.mean()
    assert std == err.std()
    with pytest.raises(ValueError):
        mae_std([], [])
    with pytest.raises(ValueError):
        mae_std([1], [1, 2])


def test_grid_validation():
    with pytest.raises(ValueError):
        CalibrationGrid((), (0.0,), (0.0,))
    with pytest.raises(ValueError):
        CalibrationGrid((1.0, 1.0), (0.0,), (0.0,))
    g = CalibrationGrid((-1.0, 0.0), (0.0,), (0.0, 1.0, 2.0))
    assert g.n_combinations == 6


def test_calibrate_matches_brute_force():
    rng = np.random.default_rng(12)
    diagrams, labels = [], []
    for _ in range(20):
        n = rng.integers(1, 10)
        births = rng.uniform(-10, 0, size=n)
        deaths = births + rng.uniform(0.1, 8, size=n)
        diagrams.append(_diag([(0, b, d) for b, d in zip(births, deaths)]))
        labels.append((int(rng.integers(0, 6)), 0))
    grid = CalibrationGrid((-9.0, -5.0, -2.0), (-6.0, -3.0, 0.0),
                           (0.0, 1.0, 3.0))
    res = calibrate(diagrams, labels, grid, 0)
    best, best_mae = brute_calibrate(diagrams, labels, grid, 0)
    assert res.best == best
    assert res.mae == pytest.approx(best_mae)


def test_calibrate_tie_break_lexicographic():
    # empty diagram: every window scores the same; smallest params win
    diagrams = [_diag([])]
    labels = [(0, 0)]
    grid = CalibrationGrid((-2.0, -1.0), (-1.0, 0.0), (0.0, 1.0))
    res = calibrate(diagrams, labels, grid, 0)
    assert res.best == WindowParams(-2.0, -1.0, 0.0)
    assert res.mae == 0.0


def test_default_grid_is_25_cubed():
    rng = np.random.default_rng(7)
    diagrams = []
    for _ in range(10):
        births = rng.uniform(-20, -1, size=50)
        deaths = births + rng.uniform(0.5, 10, size=50)
        diagrams.append(_diag([(0, b, d) for b, d in zip(births, deaths)]))
    g = default_grid(diagrams)
    assert g.n_combinations == 25 ** 3 == 15_625


def test_quantile_grid_contains_landmarks():
    d = _diag([(0, -4.0, INF), (0, -3.0, -2.0), (1, -1.0, 3.0)])
    g = quantile_grid([d], n=10)
    assert -1.0 in g.birth_lb_axis
    assert 0.0 in g.min_pers_axis


def test_quantile_grid_empty_dim_degrades():
    d = _diag([(0, -4.0, INF)])
    g = quantile_grid([d], dim=1)
    assert g.n_combinations == 1


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31), st.floats(-5, 5), st.floats(0, 4), st.floats(0, 4))
def test_property_count_monotone(seed, lb, width, mp):
    rng = np.random.default_rng(seed)
    n = rng.integers(0, 12)
    births = rng.uniform(-6, 2, size=n)
    deaths = births + rng.uniform(0, 6, size=n)
    d = _diag([(0, b, dd) for b, dd in zip(births, deaths)])
    base = count_window(d, WindowParams(lb, lb + width, mp), 0)
    # widening the birth window or lowering min_pers never loses pairs
    assert count_window(d, WindowParams(lb - 1, lb + width + 1, mp), 0) >= base
    assert count_window(d, WindowParams(lb, lb + width, mp / 2), 0) >= base
