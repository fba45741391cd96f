"""Spectral-residual visual saliency and saliency similarity.

The saliency map is computed at a reduced working resolution: the input
is resized to ``working_width`` columns (aspect ratio kept), and the
log-amplitude spectrum minus its 3x3 local average is transformed back
with the original phase. The squared magnitude, smoothed by a 9x9
Gaussian (sigma 2.5) and divided by its maximum, is the saliency map.
"""

import numpy as np
from scipy import ndimage

from .errors import ConfigurationError
from .image import as_gray, bilinear_resize
from .similarity import SimilarityMap, similarity

DEFAULT_C2 = 0.00008
DEFAULT_WORKING_WIDTH = 64
MIN_WORKING_WIDTH = 16

LOG_EPS = 1e-12
SMOOTH_SIGMA = 2.5
SMOOTH_RADIUS = 4


def gaussian_kernel_1d(sigma: float = SMOOTH_SIGMA, radius: int = SMOOTH_RADIUS) -> np.ndarray:
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


_SMOOTH = gaussian_kernel_1d()


def working_shape(shape, working_width: int = DEFAULT_WORKING_WIDTH):
    """``(height, width)`` of the saliency map for an image of ``shape``."""
    if int(working_width) != working_width or working_width < MIN_WORKING_WIDTH:
        raise ConfigurationError(
            f"working width must be an integer >= {MIN_WORKING_WIDTH}, got {working_width!r}"
        )
    h, w = shape
    height = int(np.floor(h * working_width / w + 0.5))
    if height < 1:
        raise ConfigurationError(
            f"a {w}x{h} image resized to width {working_width} has zero height"
        )
    return height, int(working_width)


def spectral_residual_saliency(img, working_width: int = DEFAULT_WORKING_WIDTH) -> np.ndarray:
    """Saliency map in ``[0, 1]`` at the working resolution.

    Example:
        >>> img = np.zeros((64, 64)); img[28:36, 28:36] = 255
        >>> spectral_residual_saliency(img).shape
        (64, 64)
    """
    arr = as_gray(img)
    small = bilinear_resize(arr, *working_shape(arr.shape, working_width))

    spectrum = np.fft.fft2(small)
    log_amp = np.log(np.abs(spectrum) + LOG_EPS)
    residual = log_amp - ndimage.uniform_filter(log_amp, size=3, mode="nearest")
    recon = np.fft.ifft2(np.exp(residual + 1j * np.angle(spectrum)))
    sal = recon.real**2 + recon.imag**2

    sal = ndimage.convolve1d(sal, _SMOOTH, axis=0, mode="nearest")
    sal = ndimage.convolve1d(sal, _SMOOTH, axis=1, mode="nearest")

    peak = sal.max()
    if peak > 0:
        sal = sal / peak
    return np.clip(sal, 0.0, 1.0)


def gvss_map(vs_r, vs_d, c2: float = DEFAULT_C2) -> SimilarityMap:
    """Global saliency similarity between two saliency maps of equal shape."""
    return SimilarityMap(similarity(vs_r, vs_d, c2), "saliency")
