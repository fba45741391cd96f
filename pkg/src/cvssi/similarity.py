from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ShapeError

FEATURES = ("contrast", "saliency")


@dataclass(frozen=True)
class SimilarityMap:
    """Per-position similarity values in ``(0, 1]`` and the feature behind them."""

    values: np.ndarray
    feature: str

    def __post_init__(self):
        if self.feature not in FEATURES:
            raise ConfigurationError(f"unknown feature tag {self.feature!r}")

    @property
    def shape(self):
        return self.values.shape


def similarity(a, b, c: float) -> np.ndarray:
    """Stabilized ratio ``(2ab + c) / (a^2 + b^2 + c)``, elementwise.

    Evaluated as ``1 - (a - b)^2 / (a^2 + b^2 + c)``, which is the same
    quantity but is exactly symmetric, never exceeds 1 through rounding,
    and is exactly 1 wherever ``a == b``.
    """
    if not c > 0:
        raise ConfigurationError(f"stabilizing constant must be positive, got {c!r}")
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return 1.0 - diff * diff / (a * a + b * b + c)
