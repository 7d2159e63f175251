from collections import Counter

import numpy as np

from topobench.diagrams import (PersistenceDiagram, from_pairs,
                                load_diagram_csv, save_diagram_csv)
from topobench.fastph import persistence_fast
from topobench.filtration import build_filtration, persistence_reduce
from topobench.raster import betti_labels
from topobench.sedt import sedt

from oracles import random_binary

INF = np.inf


def test_ring_diagram_exact(ring3):
    d = persistence_reduce(sedt(ring3), "ring")
    assert d.multiset(0) == Counter({(-2.0, INF): 1, (-2.0, -1.0): 3})
    assert d.multiset(1) == Counter({(-1.0, 1.0): 1})


def test_fast_matches_ring(ring3):
    a = persistence_reduce(sedt(ring3))
    b = persistence_fast(sedt(ring3))
    assert a.same_pairs(b)


def test_fast_matches_reduce_random_fields():
    rng = np.random.default_rng(17)
    for _ in range(25):
        h, w = rng.integers(2, 10, size=2)
        f = rng.integers(-8, 9, size=(h, w))
        assert persistence_reduce(f).same_pairs(persistence_fast(f))


def test_fast_matches_reduce_sedt_fields():
    rng = np.random.default_rng(18)
    for _ in range(15):
        img = random_binary(rng, 16, 16, rng.uniform(0.2, 0.8))
        f = sedt(img)
        assert persistence_reduce(f).same_pairs(persistence_fast(f))


def test_single_essential_component():
    rng = np.random.default_rng(2)
    f = rng.integers(-5, 6, size=(8, 8))
    for d in (persistence_reduce(f), persistence_fast(f)):
        ess = [(dim, b) for dim, b, dth in zip(d.dims, d.births, d.deaths)
               if np.isinf(dth)]
        assert ess == [(0, float(f.min()))]


def test_no_zero_persistence_pairs():
    rng = np.random.default_rng(9)
    f = rng.integers(-3, 4, size=(10, 10))
    d = persistence_fast(f)
    finite = np.isfinite(d.deaths)
    assert np.all(d.deaths[finite] > d.births[finite])


def test_sublevel_at_minus_one_equals_betti():
    # features alive across the -1 threshold are exactly the Betti labels
    # of the foreground (negative phase) region
    rng = np.random.default_rng(33)
    for _ in range(20):
        img = random_binary(rng, 20, 20, rng.uniform(0.3, 0.7))
        d = persistence_fast(sedt(img))
        lab = betti_labels(img)
        for dim, want in ((0, lab.beta0), (1, lab.beta1)):
            b, dth = d.select(dim)
            alive = (b <= -1) & (dth > -1)
            assert int(alive.sum()) == want


def test_filtration_cell_counts():
    rng = np.random.default_rng(1)
    f = rng.integers(-3, 4, size=(4, 5))
    cells = build_filtration(f)
    h, w = f.shape
    n_v = (w + 1) * (h + 1)
    n_e = w * (h + 1) + h * (w + 1)
    n_f = w * h
    assert len(cells) == n_v + n_e + n_f
    values = [c.value for c in cells]
    assert values == sorted(values)


def test_diagram_csv_roundtrip(tmp_path):
    d = from_pairs("img7", [(0, -4.0, INF), (0, -4.0, -2.0), (1, -1.0, 3.0)])
    path = tmp_path / "img7.pd.csv"
    save_diagram_csv(d, path)
    d2 = load_diagram_csv(path, "img7")
    assert d.same_pairs(d2)
    assert isinstance(d2, PersistenceDiagram)


def test_multiset_is_order_invariant():
    a = from_pairs("x", [(0, -2.0, 1.0), (1, -1.0, 0.0)])
    b = from_pairs("x", [(1, -1.0, 0.0), (0, -2.0, 1.0)])
    assert a.same_pairs(b)
