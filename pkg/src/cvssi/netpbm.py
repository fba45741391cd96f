"""Minimal PGM/PPM (Netpbm) codec plus debug dumps of float maps.

Reads ``P2``/``P5`` (gray) and ``P3``/``P6`` (color) with ``maxval <= 255``.
Integer sample ``v`` decodes to float ``v``; nothing is rescaled by
``maxval``.
"""

import csv
import re

import numpy as np

from .errors import RejectedInputError
from .image import to_grayscale

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


class NetpbmError(RejectedInputError):
    pass


def _header(data: bytes, count: int):
    pos = 0
    tokens = []
    for _ in range(count):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise NetpbmError("truncated header")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens, pos


def decode(data: bytes) -> np.ndarray:
    """Decode a Netpbm byte string into ``(H, W)`` or ``(H, W, 3)`` float64."""
    (magic, w, h, maxval), pos = _header(data, 4)
    try:
        w, h, maxval = int(w), int(h), int(maxval)
    except ValueError:
        raise NetpbmError("non-integer header field") from None
    if magic not in (b"P2", b"P3", b"P5", b"P6"):
        raise NetpbmError(f"unsupported magic {magic!r}")
    if w < 1 or h < 1:
        raise NetpbmError(f"invalid dimensions {w}x{h}")
    if not 0 < maxval < 256:
        raise NetpbmError(f"only 8-bit files are supported (maxval {maxval})")
    channels = 3 if magic in (b"P3", b"P6") else 1
    count = w * h * channels

    if magic in (b"P5", b"P6"):
        # exactly one whitespace byte separates the header from the raster
        raster = data[pos + 1:pos + 1 + count]
        if len(raster) != count:
            raise NetpbmError(f"expected {count} raster bytes, got {len(raster)}")
        values = np.frombuffer(raster, dtype=np.uint8)
    else:
        body = re.sub(rb"#[^\n]*", b"", data[pos:]).split()
        if len(body) < count:
            raise NetpbmError(f"expected {count} samples, got {len(body)}")
        values = np.array([int(t) for t in body[:count]], dtype=np.int64)

    if values.max(initial=0) > maxval:
        raise NetpbmError("sample exceeds maxval")
    shape = (h, w, 3) if channels == 3 else (h, w)
    return values.astype(np.float64).reshape(shape)


def encode(img) -> bytes:
    """Encode to binary ``P5``/``P6``. Samples must be integers in ``[0, 255]``."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 2:
        magic = b"P5"
    elif arr.ndim == 3 and arr.shape[2] == 3:
        magic = b"P6"
    else:
        raise RejectedInputError(f"cannot encode array of shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or arr.min() < 0 or arr.max() > 255 or np.any(arr != np.rint(arr)):
        raise RejectedInputError("samples must be integers in [0, 255]; quantize first")
    h, w = arr.shape[:2]
    return b"%s\n%d %d\n255\n" % (magic, w, h) + arr.astype(np.uint8).tobytes()


def read_image(path) -> np.ndarray:
    with open(path, "rb") as f:
        return decode(f.read())


def write_image(path, img) -> None:
    with open(path, "wb") as f:
        f.write(encode(img))


def read_gray(path) -> np.ndarray:
    """Read a PGM or PPM file as a grayscale plane (color is converted)."""
    return to_grayscale(read_image(path))


def quantize(img) -> np.ndarray:
    """Round and clip to the 8-bit grid, keeping float64."""
    return np.clip(np.rint(np.asarray(img, dtype=np.float64)), 0.0, 255.0)


def save_map_pgm(path, values) -> None:
    """Dump a float map as PGM, linearly stretched so min -> 0 and max -> 255.

    A constant map is written as all zeros.
    """
    v = np.asarray(values, dtype=np.float64)
    lo, hi = v.min(), v.max()
    scaled = np.zeros_like(v) if hi == lo else (v - lo) / (hi - lo) * 255.0
    write_image(path, quantize(scaled))


def save_map_csv(path, values) -> None:
    v = np.asarray(values, dtype=np.float64)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        for row in v:
            writer.writerow([repr(float(x)) for x in row])


def load_map_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2)

