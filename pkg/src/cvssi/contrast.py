"""Local RMS contrast maps and their similarity."""

import numpy as np

from .image import local_std_map
from .similarity import SimilarityMap, similarity

DEFAULT_C1 = 55.0


def contrast_map(img, window: int = 3) -> np.ndarray:
    """Local RMS contrast of ``img`` in luminance units (see ``local_std_map``)."""
    return local_std_map(img, window)


def lcs_map(lc_r, lc_d, c1: float = DEFAULT_C1) -> SimilarityMap:
    """Local contrast similarity between reference and distorted contrast maps."""
    return SimilarityMap(similarity(lc_r, lc_d, c1), "contrast")
