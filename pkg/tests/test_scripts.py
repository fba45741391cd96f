"""Smoke tests for the converter and study scripts on fabricated miniature layouts."""

import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from cvssi.dataset import load_manifest
from cvssi.netpbm import read_image

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"
Image = pytest.importorskip("PIL.Image")


def run_script(name, *args):
    proc = subprocess.run([sys.executable, str(SCRIPTS / name), *map(str, args)],
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    return proc


def bmp(path, rng, size=(40, 48)):
    arr = rng.integers(0, 256, (*size, 3), dtype=np.uint8)
    Image.fromarray(arr).save(path, format="BMP")
    return arr


def test_convert_tid2008(tmp_path, rng):
    src = tmp_path / "tid"
    (src / "reference_images").mkdir(parents=True)
    (src / "distorted_images").mkdir()
    ref = bmp(src / "reference_images" / "I01.BMP", rng)
    lines = []
    for kind, level in [(1, 1), (8, 3), (17, 4)]:
        name = f"i01_{kind:02d}_{level}.bmp"
        bmp(src / "distorted_images" / name, rng)
        lines.append(f"{5 - level * 0.5:.4f} {name}")
    (src / "mos_with_names.txt").write_text("\n".join(lines) + "\n")

    out = tmp_path / "out"
    run_script("convert_tid2008.py", src, out)
    m = load_manifest(out / "manifest.csv")
    assert [(r.distortion, r.level, r.subjective) for r in m.records] == [
        ("AGN", 1, 4.5), ("GB", 3, 3.5), ("CTC", 4, 3.0)]
    np.testing.assert_array_equal(read_image(m.resolve(m.records[0].ref_path)), ref)


def test_convert_live(tmp_path, rng):
    scipy_io = pytest.importorskip("scipy.io")
    src = tmp_path / "live"
    blocks = (("jp2k", 227), ("jpeg", 233), ("wn", 174), ("gblur", 174), ("fastfading", 174))
    (src / "refimgs").mkdir(parents=True)
    bmp(src / "refimgs" / "a.bmp", rng)
    dmos, orgs = [], []
    for folder, count in blocks:
        (src / folder).mkdir()
        info = []
        for k in range(1, count + 1):
            if k <= 2:  # two real entries per block, the rest marked as originals
                bmp(src / folder / f"img{k}.bmp", rng, (16, 16))
                info.append(f"a.bmp img{k}.bmp {3 - k}.5")
            dmos.append(10.0 * k)
            orgs.append(0 if k <= 2 else 1)
        (src / folder / "info.txt").write_text("\n".join(info) + "\n")
    scipy_io.savemat(src / "dmos.mat", {"dmos": np.array([dmos]), "orgs": np.array([orgs])})

    out = tmp_path / "out"
    proc = run_script("convert_live.py", src, out, "--gray")
    assert "expected 779" in proc.stderr
    m = load_manifest(out / "manifest.csv", "lower-is-better")
    assert len(m) == 10
    assert [r.distortion for r in m.records[::2]] == ["JP2K", "JPEG", "AWGN", "GB", "FF"]
    # img1 has parameter 2.5, img2 has 1.5: ascending rank puts img2 first
    assert [(r.dist_path, r.level, r.subjective) for r in m.records[:2]] == [
        ("jp2k/img1.pgm", 2, 10.0), ("jp2k/img2.pgm", 1, 20.0)]


def test_synthetic_study(tmp_path, data_dir):
    proc = run_script("run_synthetic_study.py", "--images", data_dir / "coins.pgm", data_dir / "clock.pgm",
                      "--levels", "3", "--out", tmp_path)
    assert "pooling ablation" in proc.stdout
    assert (tmp_path / "report.json").is_file() and len(load_manifest(tmp_path / "manifest.csv")) == 18


def test_sensitivity_sweep(tmp_path, data_dir):
    run_script("run_synthetic_study.py", "--images", data_dir / "coins.pgm", "--levels", "2", "--out", tmp_path)
    run_script("sensitivity_sweep.py", tmp_path / "manifest.csv", "--out", tmp_path / "sweep.csv")
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0] == "window,sr_width,srocc,krocc,plcc,rmse" and len(lines) == 13
