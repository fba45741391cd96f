"""Grayscale image substrate: validation, color conversion, 2x box
downsampling, bilinear resizing and local standard deviation maps.

Images are plain ``numpy`` arrays of ``float64``: grayscale is ``(H, W)``,
color is ``(H, W, 3)``. Sample values keep their 8-bit scale ``[0, 255]``.
Nothing here mutates its input.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ConfigurationError, RejectedInputError

MIN_METRIC_SIDE = 8

# ITU-R BT.601 luma weights
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def as_gray(img, min_side: int = 1) -> np.ndarray:
    """Validate ``img`` as a grayscale plane and return it as ``float64``."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2:
        raise RejectedInputError(f"expected a 2-D grayscale image, got shape {arr.shape}")
    h, w = arr.shape
    if h < min_side or w < min_side:
        raise RejectedInputError(
            f"image is {w}x{h}; at least {min_side}x{min_side} is required"
        )
    if not np.all(np.isfinite(arr)):
        raise RejectedInputError("image contains non-finite samples")
    return arr


def as_rgb(img) -> np.ndarray:
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise RejectedInputError(f"expected an (H, W, 3) color image, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise RejectedInputError("color image has zero area")
    if not np.all(np.isfinite(arr)):
        raise RejectedInputError("image contains non-finite samples")
    return arr


def to_grayscale(img) -> np.ndarray:
    """Convert an ``(H, W, 3)`` RGB image to luma with BT.601 weights.

    A 2-D input is taken to be gray already and is returned validated.
    Gray triples ``(v, v, v)`` map back to ``v`` exactly.
    """
    if np.ndim(img) == 2:
        return as_gray(img)
    rgb = as_rgb(img)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    gray = LUMA_WEIGHTS[0] * r + LUMA_WEIGHTS[1] * g + LUMA_WEIGHTS[2] * b
    # The weights sum to 1 only up to rounding; keep gray pixels exact.
    neutral = (r == g) & (g == b)
    return np.where(neutral, r, gray)


def box_downsample_2x(img) -> np.ndarray:
    """Average non-overlapping 2x2 blocks.

    The output is ``(H // 2, W // 2)``; an odd trailing row or column is
    dropped rather than interpolated.
    """
    arr = as_gray(img, min_side=2)
    h, w = arr.shape[0] // 2 * 2, arr.shape[1] // 2 * 2
    blocks = arr[:h, :w].reshape(h // 2, 2, w // 2, 2)
    return blocks.mean(axis=(1, 3))


def check_window(window: int, shape=None) -> int:
    if int(window) != window or window < 3 or window % 2 == 0:
        raise ConfigurationError(f"window must be an odd integer >= 3, got {window!r}")
    window = int(window)
    if shape is not None and window > min(shape):
        raise ConfigurationError(
            f"window {window} exceeds the smaller image side {min(shape)}"
        )
    return window


def local_std_map(img, window: int = 3) -> np.ndarray:
    """Per-pixel RMS contrast over a centered ``window x window`` neighborhood.

    Borders are handled by replicating edge pixels. The deviation sum is
    normalized by ``N - 1`` with ``N = window**2``, i.e. the sample
    standard deviation.
    """
    arr = as_gray(img)
    window = check_window(window, arr.shape)
    pad = window // 2
    padded = np.pad(arr, pad, mode="edge")
    patches = sliding_window_view(padded, (window, window))
    # Two-pass form: flat neighborhoods come out exactly zero, which the
    # sum-of-squares shortcut does not guarantee.
    mean = patches.mean(axis=(-2, -1))
    dev = patches - mean[..., None, None]
    n = window * window
    return np.sqrt(np.einsum("ijkl,ijkl->ij", dev, dev) / (n - 1))


def bilinear_resize(img, height: int, width: int) -> np.ndarray:
    """Resize with bilinear interpolation on pixel centers, clamping at edges.

    Resizing to the input's own shape is the identity.
    """
    arr = as_gray(img)
    if height < 1 or width < 1:
        raise ConfigurationError(f"cannot resize to {width}x{height}")
    rows = _sample_positions(arr.shape[0], height)
    cols = _sample_positions(arr.shape[1], width)
    r0, r1, fr = rows
    c0, c1, fc = cols
    top = arr[r0][:, c0] * (1.0 - fc) + arr[r0][:, c1] * fc
    bottom = arr[r1][:, c0] * (1.0 - fc) + arr[r1][:, c1] * fc
    return top * (1.0 - fr)[:, None] + bottom * fr[:, None]


def _sample_positions(src: int, dst: int):
    pos = (np.arange(dst) + 0.5) * (src / dst) - 0.5
    pos = np.clip(pos, 0.0, src - 1)
    lo = np.floor(pos).astype(np.intp)
    hi = np.minimum(lo + 1, src - 1)
    return lo, hi, pos - lo
