"""The contrast and visual saliency similarity index (CVSSI).

Both images are box-averaged and downsampled by two. A local contrast
similarity map is built at that scale and a saliency similarity map at
the spectral-residual working scale. The score is the weighted sum of
the two maps' standard deviations: 0 for identical images, larger for
worse quality.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .contrast import DEFAULT_C1, contrast_map, lcs_map
from .errors import ConfigurationError, ShapeError
from .image import MIN_METRIC_SIDE, as_gray, bilinear_resize, box_downsample_2x, check_window
from .saliency import DEFAULT_C2, DEFAULT_WORKING_WIDTH, gvss_map, spectral_residual_saliency, working_shape
from .similarity import SimilarityMap


@dataclass(frozen=True)
class MetricParams:
    c1: float = DEFAULT_C1
    c2: float = DEFAULT_C2
    w1: float = 0.545
    w2: float = 0.455
    window: int = 3
    sr_working_width: int = DEFAULT_WORKING_WIDTH

    def __post_init__(self):
        if not (self.c1 > 0 and self.c2 > 0):
            raise ConfigurationError("c1 and c2 must be positive")
        if not (0.0 <= self.w1 <= 1.0 and 0.0 <= self.w2 <= 1.0):
            raise ConfigurationError("w1 and w2 must lie in [0, 1]")
        if abs(self.w1 + self.w2 - 1.0) > 1e-9:
            raise ConfigurationError(f"w1 + w2 must equal 1, got {self.w1 + self.w2!r}")
        check_window(self.window)
        working_shape((1, 1), self.sr_working_width)


@dataclass(frozen=True)
class MetricScore:
    score: float
    sd_lcs: float
    sd_gvss: float


class PoolingStrategy(str, enum.Enum):
    PRODUCT_MEAN = "product_mean"
    PRODUCT_STD = "product_std"
    PRODUCT_MAD = "product_mad"
    SUM_OF_MEANS = "sum_of_means"
    SUM_OF_MADS = "sum_of_mads"
    SUM_OF_STDS = "sum_of_stds"


def _values(m) -> np.ndarray:
    v = m.values if isinstance(m, SimilarityMap) else np.asarray(m, dtype=np.float64)
    if v.size == 0:
        raise ShapeError("cannot pool an empty map")
    return v


def mean_pool(m) -> float:
    return float(np.mean(_values(m)))


def sd_pool(m) -> float:
    """Population (1/N) standard deviation of all map values."""
    return float(np.std(_values(m)))


def mad_pool(m) -> float:
    """Mean absolute deviation from the map mean."""
    v = _values(m)
    return float(np.mean(np.abs(v - v.mean())))


# strategy -> (combine as product?, statistic)
_STRATEGIES = {
    PoolingStrategy.PRODUCT_MEAN: (True, mean_pool),
    PoolingStrategy.PRODUCT_STD: (True, sd_pool),
    PoolingStrategy.PRODUCT_MAD: (True, mad_pool),
    PoolingStrategy.SUM_OF_MEANS: (False, mean_pool),
    PoolingStrategy.SUM_OF_MADS: (False, mad_pool),
    PoolingStrategy.SUM_OF_STDS: (False, sd_pool),
}


def similarity_maps(ref, dist, params: MetricParams = MetricParams()):
    """Return the ``(LCS, GVSS)`` similarity maps for an image pair.

    The LCS map has the downsampled image shape; the GVSS map has the
    saliency working shape. They are never resampled onto each other here.
    """
    ref = as_gray(ref, MIN_METRIC_SIDE)
    dist = as_gray(dist, MIN_METRIC_SIDE)
    if ref.shape != dist.shape:
        raise ShapeError(f"dimension mismatch: {ref.shape} vs {dist.shape}")

    r = box_downsample_2x(ref)
    d = box_downsample_2x(dist)

    lcs = lcs_map(contrast_map(r, params.window), contrast_map(d, params.window), params.c1)
    gvss = gvss_map(
        spectral_residual_saliency(r, params.sr_working_width),
        spectral_residual_saliency(d, params.sr_working_width),
        params.c2,
    )
    return lcs, gvss


def cvssi_score(ref, dist, params: MetricParams = MetricParams()) -> MetricScore:
    """Score a distorted image against its reference. Lower is better.

    Example:
        >>> img = np.tile(np.arange(32.0), (32, 1))
        >>> cvssi_score(img, img).score
        0.0
    """
    lcs, gvss = similarity_maps(ref, dist, params)
    sd_lcs = sd_pool(lcs)
    sd_gvss = sd_pool(gvss)
    return MetricScore(params.w1 * sd_lcs + params.w2 * sd_gvss, sd_lcs, sd_gvss)


def pool_maps(lcs, gvss, strategy, params: MetricParams = MetricParams()) -> float:
    """Collapse a precomputed ``(LCS, GVSS)`` pair with one pooling strategy.

    ``product_*`` strategies pool ``LCS * GVSS`` after bilinearly resizing
    GVSS onto the LCS grid; ``sum_of_*`` strategies pool each map on its
    own grid and combine with ``w1``/``w2``.
    """
    product, pool = _STRATEGIES[PoolingStrategy(strategy)]
    lcs_v, gvss_v = _values(lcs), _values(gvss)
    if product:
        if gvss_v.shape != lcs_v.shape:
            gvss_v = bilinear_resize(gvss_v, *lcs_v.shape)
        return pool(lcs_v * gvss_v)
    return params.w1 * pool(lcs_v) + params.w2 * pool(gvss_v)


def ablate_pooling(ref, dist, params: MetricParams = MetricParams(), strategy=PoolingStrategy.SUM_OF_STDS) -> float:
    lcs, gvss = similarity_maps(ref, dist, params)
    return pool_maps(lcs, gvss, strategy, params)


def ablate_all(ref, dist, params: MetricParams = MetricParams()) -> dict:
    """Score one pair under every pooling strategy, sharing the feature maps."""
    lcs, gvss = similarity_maps(ref, dist, params)
    return {s: pool_maps(lcs, gvss, s, params) for s in PoolingStrategy}
