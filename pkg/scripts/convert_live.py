"""Convert the LIVE Image Quality Assessment Database (release 2) into a normalized manifest.

    python scripts/convert_live.py LIVE_DIR OUT_DIR [--gray]

Expected layout of LIVE_DIR (as distributed):

    refimgs/*.bmp
    jp2k/ jpeg/ wn/ gblur/ fastfading/       each with img<k>.bmp and info.txt
    dmos.mat                                  variables ``dmos`` and ``orgs`` (1 x 982)

Each ``info.txt`` line is ``<reference name> <distorted name> <parameter>``.
The 982 DMOS entries are ordered jp2k (227), jpeg (233), wn (174),
gblur (174), fastfading (174), each block in ``img1 .. imgN`` order. Entries
with ``orgs == 1`` are the reference images themselves and are skipped,
leaving 779 records. The subjective column is DMOS (lower is better), so
evaluate with ``--orientation lower-is-better``. The level column holds the
1-based ascending rank of the info.txt parameter within each (reference,
type) group; whether a larger parameter means a stronger distortion
depends on the type (bit rate for jp2k/jpeg, sigma for wn/gblur). Needs Pillow for BMP decoding.
"""

import argparse
import csv
import sys
from pathlib import Path

import numpy as np
from PIL import Image
from scipy.io import loadmat

from cvssi.netpbm import write_image

BLOCKS = (("jp2k", "JP2K", 227), ("jpeg", "JPEG", 233), ("wn", "AWGN", 174),
          ("gblur", "GB", 174), ("fastfading", "FF", 174))


def convert(src: Path, rel: Path, out: Path, gray: bool) -> Path:
    img = Image.open(src).convert("L" if gray else "RGB")
    rel = rel.with_suffix(".pgm" if gray else ".ppm")
    (out / rel).parent.mkdir(parents=True, exist_ok=True)
    write_image(out / rel, np.asarray(img, dtype=np.float64))
    return rel


def read_info(path: Path):
    """Map distorted file name to (reference name, parameter)."""
    info = {}
    for line in path.read_text(encoding="latin-1").splitlines():
        parts = line.split()
        if len(parts) >= 3:
            info[parts[1]] = (parts[0], float(parts[2]))
    return info


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("live_dir", type=Path)
    ap.add_argument("out_dir", type=Path)
    ap.add_argument("--gray", action="store_true", help="store grayscale PGM instead of color PPM")
    args = ap.parse_args()

    mat = loadmat(args.live_dir / "dmos.mat")
    dmos, orgs = mat["dmos"].ravel(), mat["orgs"].ravel()
    if dmos.size != sum(n for *_, n in BLOCKS):
        sys.exit(f"dmos.mat has {dmos.size} entries, expected {sum(n for *_, n in BLOCKS)}")

    records, refs, offset = [], {}, 0
    for folder, label, count in BLOCKS:
        info = read_info(args.live_dir / folder / "info.txt")
        for k in range(1, count + 1):
            j = offset + k - 1
            name = f"img{k}.bmp"
            if orgs[j]:
                continue
            ref_name, param = info[name]
            if ref_name not in refs:
                refs[ref_name] = convert(args.live_dir / "refimgs" / ref_name, Path("refimgs") / ref_name,
                                         args.out_dir, args.gray)
            dist = convert(args.live_dir / folder / name, Path(folder) / name, args.out_dir, args.gray)
            records.append([refs[ref_name].as_posix(), dist.as_posix(), label, param, float(dmos[j])])
        offset += count

    # parameter -> ordinal level within each (reference, type) group
    groups = {}
    for rec in records:
        groups.setdefault((rec[0], rec[2]), []).append(rec)
    for group in groups.values():
        for level, rec in enumerate(sorted(group, key=lambda r: r[3]), start=1):
            rec[3] = level

    args.out_dir.mkdir(parents=True, exist_ok=True)
    with open(args.out_dir / "manifest.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["ref_path", "dist_path", "distortion", "level", "subjective"])
        writer.writerows(records)
    print(f"{len(records)} records ({len(refs)} references) -> {args.out_dir / 'manifest.csv'}")
    if len(records) != 779:
        print(f"warning: expected 779 distorted images, found {len(records)}", file=sys.stderr)


if __name__ == "__main__":
    main()
