"""Convert a TID2008 release into a normalized manifest with PGM/PPM images.

    python scripts/convert_tid2008.py TID2008_DIR OUT_DIR [--gray]

Expected layout of TID2008_DIR (as distributed):

    reference_images/I01.BMP ... I25.BMP
    distorted_images/i01_01_1.bmp ...        i<image>_<type>_<level>.bmp
    mos_with_names.txt                       "<MOS> <distorted file name>" per line

The manifest's subjective column is MOS (higher is better), so evaluate with
``--orientation higher-is-better``. File names are matched case-insensitively
because releases mix ``.BMP`` and ``.bmp``. Needs Pillow for BMP decoding.
"""

import argparse
import csv
import re
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from cvssi.netpbm import write_image

TYPES = ("AGN", "ANC", "SCN", "MN", "HFN", "IN", "QN", "GB", "DEN",
         "JPEG", "JP2K", "JGTE", "J2TE", "NEPN", "BLOCK", "MS", "CTC")
NAME = re.compile(r"^i(\d\d)_(\d\d)_(\d)\.bmp$", re.IGNORECASE)


def index_dir(path: Path):
    return {p.name.lower(): p for p in path.iterdir() if p.is_file()}


def convert(src: Path, out: Path, gray: bool) -> Path:
    """Decode a BMP and write it as PPM (or PGM with ``gray``); return the relative name."""
    img = Image.open(src)
    img = img.convert("L" if gray else "RGB")
    ext = ".pgm" if gray else ".ppm"
    rel = Path(src.stem.lower() + ext)
    write_image(out / rel, np.asarray(img, dtype=np.float64))
    return rel


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("tid_dir", type=Path)
    ap.add_argument("out_dir", type=Path)
    ap.add_argument("--gray", action="store_true", help="store grayscale PGM instead of color PPM")
    args = ap.parse_args()

    refs = index_dir(args.tid_dir / "reference_images")
    dists = index_dir(args.tid_dir / "distorted_images")
    args.out_dir.mkdir(parents=True, exist_ok=True)

    rows, converted = [], {}
    with open(args.tid_dir / "mos_with_names.txt", encoding="latin-1") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            mos, name = line.split()
            m = NAME.match(name)
            if m is None:
                sys.exit(f"line {line_no}: unexpected file name {name!r}")
            image, kind, level = (int(g) for g in m.groups())
            ref_key = f"i{image:02d}.bmp"
            if ref_key not in refs or name.lower() not in dists:
                sys.exit(f"line {line_no}: missing {ref_key} or {name}")
            if ref_key not in converted:
                converted[ref_key] = convert(refs[ref_key], args.out_dir, args.gray)
            dist_rel = convert(dists[name.lower()], args.out_dir, args.gray)
            rows.append([converted[ref_key].as_posix(), dist_rel.as_posix(), TYPES[kind - 1], level, mos])

    with open(args.out_dir / "manifest.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["ref_path", "dist_path", "distortion", "level", "subjective"])
        writer.writerows(rows)
    print(f"{len(rows)} records ({len(converted)} references) -> {args.out_dir / 'manifest.csv'}")
    if len(rows) != 1700:
        print(f"warning: expected 1700 distorted images, found {len(rows)}", file=sys.stderr)


if __name__ == "__main__":
    main()
