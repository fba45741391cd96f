"""Regenerate the natural images under tests/data from scikit-image's sample data.

    python scripts/export_test_images.py [outdir]

Requires scikit-image (not a runtime dependency of the package).
"""

import sys
from pathlib import Path

import numpy as np
from skimage import data

from cvssi.image import box_downsample_2x
from cvssi.netpbm import quantize, write_image


def half(img):
    if img.ndim == 2:
        return box_downsample_2x(img)
    return np.stack([box_downsample_2x(img[..., c]) for c in range(3)], axis=-1)


def main(outdir):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    images = {
        "camera.pgm": data.camera().astype(float),
        "moon.pgm": half(data.moon().astype(float)),
        "coins.pgm": data.coins().astype(float),
        "clock.pgm": data.clock().astype(float),
        "astronaut.ppm": half(data.astronaut().astype(float)),
        "coffee.ppm": half(data.coffee().astype(float)),
    }
    for name, img in images.items():
        write_image(outdir / name, quantize(img))
        print(name, img.shape)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "tests" / "data")
