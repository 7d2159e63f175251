import pytest

from nn_helpers import run_cli


@pytest.fixture(scope="session")
def small_dataset(tmp_path_factory):
    """12 clean 96x96 samples, corrupted at all levels, split manifest."""
    root = tmp_path_factory.mktemp("ds_small")
    run_cli("synth", "--n", 12, "--size", 96, "--seed", 11, "--out", root)
    run_cli("corrupt", "--profile", "voronoi", "--dataset-dir", root,
            "--seed", 11)
    return root


@pytest.fixture(scope="session")
def s2_dataset(tmp_path_factory):
    """100 clean 128x128 samples x 5 levels = 500 images."""
    root = tmp_path_factory.mktemp("ds_s2")
    run_cli("synth", "--n", 100, "--size", 128, "--seed", 21, "--out", root)
    run_cli("corrupt", "--profile", "voronoi", "--dataset-dir", root,
            "--seed", 21)
    return root
