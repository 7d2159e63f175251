"""Label normalization: linear map of each Betti component onto [0, 1]."""

from __future__ import annotations

import warnings
from dataclasses import dataclass


@dataclass(frozen=True)
class NormalizationSpec:
    beta0_range: tuple = (1, 50)
    beta1_range: tuple = (0, 100)

    def __post_init__(self):
        for name in ("beta0_range", "beta1_range"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ValueError(f"{name} must be increasing, got ({lo}, {hi})")


def _clamp(v: float, lo: float, hi: float, what: str) -> float:
    if v < lo or v > hi:
        warnings.warn(f"{what}={v} outside [{lo}, {hi}], clamping")
        return min(max(v, lo), hi)
    return v


def normalize_labels(pair, spec: NormalizationSpec = NormalizationSpec()):
    """(beta0, beta1) -> values in [0, 1]^2; out-of-range inputs are
    clamped with a warning."""
    b0, b1 = pair
    lo0, hi0 = spec.beta0_range
    lo1, hi1 = spec.beta1_range
    b0 = _clamp(float(b0), lo0, hi0, "beta0")
    b1 = _clamp(float(b1), lo1, hi1, "beta1")
    return (b0 - lo0) / (hi0 - lo0), (b1 - lo1) / (hi1 - lo1)


def denormalize_labels(pair, spec: NormalizationSpec = NormalizationSpec()):
    y0, y1 = pair
    lo0, hi0 = spec.beta0_range
    lo1, hi1 = spec.beta1_range
    return lo0 + float(y0) * (hi0 - lo0), lo1 + float(y1) * (hi1 - lo1)
