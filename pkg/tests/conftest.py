import numpy as np
import pytest


@pytest.fixture
def ring3() -> np.ndarray:
    """3x3 foreground ring around a background center."""
    img = np.ones((3, 3), dtype=bool)
    img[1, 1] = False
    return img
