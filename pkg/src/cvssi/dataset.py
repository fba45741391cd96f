"""Dataset manifests, metric score files and a synthetic distortion corpus.

Manifest CSV columns: ``ref_path, dist_path, distortion, level, subjective``.
Relative image paths are resolved against the manifest's directory. Score
CSV columns: ``dist_path, score``; scores join to a manifest by the exact
``dist_path`` string.
"""

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

from .errors import JoinError, ManifestError, ShapeError
from .evaluation import ScorePairs
from .image import as_gray
from .netpbm import quantize, read_gray, write_image

MANIFEST_COLUMNS = ("ref_path", "dist_path", "distortion", "level", "subjective")
SCORE_COLUMNS = ("dist_path", "score")
ORIENTATIONS = ("higher-is-better", "lower-is-better")

NOISE_SIGMAS = (2.0, 40.0)
BLUR_SIGMAS = (0.5, 4.0)
CONTRAST_UP = (1.25, 3.0)
CONTRAST_DOWN = (0.8, 0.33)
FAMILIES = ("noise", "blur", "contrast")


@dataclass(frozen=True)
class ManifestRecord:
    ref_path: str
    dist_path: str
    distortion: str
    level: int
    subjective: float


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    records: Tuple[ManifestRecord, ...]
    orientation: str = "higher-is-better"
    root: Path = field(default_factory=Path)

    def __post_init__(self):
        if not self.records:
            raise ManifestError(f"manifest {self.name!r} has no records")
        if self.orientation not in ORIENTATIONS:
            raise ManifestError(f"orientation must be one of {ORIENTATIONS}, got {self.orientation!r}")

    def __len__(self):
        return len(self.records)

    def resolve(self, path: str) -> Path:
        p = Path(path)
        return p if p.is_absolute() else self.root / p

    def subjective(self) -> np.ndarray:
        return np.array([r.subjective for r in self.records])

    def by_distortion(self) -> Dict[str, List[int]]:
        groups: Dict[str, List[int]] = {}
        for i, r in enumerate(self.records):
            groups.setdefault(r.distortion, []).append(i)
        return groups


def _float(text, what, row):
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise ManifestError(f"row {row}: {what} {text!r} is not a number") from None
    if not math.isfinite(v):
        raise ManifestError(f"row {row}: {what} {text!r} is not finite")
    return v


def _read_csv(path, columns):
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        missing = [c for c in columns if c not in header]
        if missing:
            raise ManifestError(f"{path}: missing column(s) {', '.join(missing)}")
        # data rows are numbered from 1, not counting the header line
        return [(i, row) for i, row in enumerate(reader, start=1)]


def load_manifest(
    path,
    orientation: str = "higher-is-better",
    name: Optional[str] = None,
    check_paths: bool = True,
) -> DatasetManifest:
    """Load a manifest CSV, preserving row order.

    Errors name the 1-based data row (the header is not counted).
    """
    path = Path(path)
    root = path.parent
    records = []
    for row_no, row in _read_csv(path, MANIFEST_COLUMNS):
        ref, dist = (row["ref_path"] or "").strip(), (row["dist_path"] or "").strip()
        if not ref or not dist:
            raise ManifestError(f"row {row_no}: empty image path")
        level = _float(row["level"], "level", row_no)
        if level != int(level):
            raise ManifestError(f"row {row_no}: level {row['level']!r} is not an integer")
        rec = ManifestRecord(ref, dist, (row["distortion"] or "").strip(), int(level),
                             _float(row["subjective"], "subjective score", row_no))
        if check_paths:
            for p in (ref, dist):
                full = Path(p) if Path(p).is_absolute() else root / p
                if not full.is_file():
                    raise ManifestError(f"row {row_no}: image not found: {p}")
        records.append(rec)
    return DatasetManifest(name or path.stem, tuple(records), orientation, root)


def write_manifest(manifest: DatasetManifest, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(MANIFEST_COLUMNS)
        for r in manifest.records:
            writer.writerow([r.ref_path, r.dist_path, r.distortion, r.level, repr(float(r.subjective))])


def write_scores(path, scores: Iterable[Tuple[str, float]]) -> None:
    """Write ``(dist_path, score)`` rows; values keep full double precision."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(SCORE_COLUMNS)
        for dist_path, score in scores:
            writer.writerow([dist_path, repr(float(score))])


def load_scores(path) -> List[Tuple[str, float]]:
    """Read a score CSV, or a JSON list of ``{"dist_path", "score"}`` objects."""
    if str(path).endswith(".json"):
        return _load_scores_json(path)
    out = []
    for row_no, row in _read_csv(path, SCORE_COLUMNS):
        dist = (row["dist_path"] or "").strip()
        if not dist:
            raise ManifestError(f"row {row_no}: empty dist_path")
        out.append((dist, _float(row["score"], "score", row_no)))
    return out


def _load_scores_json(path):
    with open(path, encoding="utf-8") as f:
        try:
            items = json.load(f)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"{path}: {exc}") from None
    if not isinstance(items, list):
        raise ManifestError(f"{path}: expected a JSON list of score objects")
    out = []
    for row_no, item in enumerate(items, start=1):
        if not isinstance(item, dict) or not item.get("dist_path") or "score" not in item:
            raise ManifestError(f"row {row_no}: expected keys dist_path and score")
        out.append((str(item["dist_path"]), _float(item["score"], "score", row_no)))
    return out


def join_scores(manifest: DatasetManifest, scores: Sequence[Tuple[str, float]]) -> ScorePairs:
    """Align scores with manifest records by ``dist_path``, in manifest order."""
    table: Dict[str, float] = {}
    for dist, score in scores:
        if dist in table:
            raise JoinError(f"duplicate score for {dist}")
        table[dist] = score
    wanted = {r.dist_path for r in manifest.records}
    for dist in table:
        if dist not in wanted:
            raise JoinError(f"score for {dist} has no manifest record")
    objective = []
    for r in manifest.records:
        if r.dist_path not in table:
            raise JoinError(f"no score for {r.dist_path}")
        objective.append(table[r.dist_path])
    return ScorePairs(
        np.array(objective),
        manifest.subjective(),
        tuple(r.dist_path for r in manifest.records),
    )


@dataclass(frozen=True)
class SynthCorpus:
    """A generated manifest and the images it references, keyed by path."""

    manifest: DatasetManifest
    images: Dict[str, np.ndarray]


def distortion_ladder(family: str, levels: int, source_index: int = 0) -> np.ndarray:
    """Strength per level (mild to severe) for one distortion family.

    Contrast alternates by source image: even indices get a gain increase
    ladder, odd indices a gain decrease ladder.
    """
    if family == "noise":
        return np.geomspace(*NOISE_SIGMAS, levels)
    if family == "blur":
        return np.geomspace(*BLUR_SIGMAS, levels)
    if family == "contrast":
        return np.geomspace(*(CONTRAST_UP if source_index % 2 == 0 else CONTRAST_DOWN), levels)
    raise ValueError(f"unknown distortion family {family!r}")


def apply_distortion(img: np.ndarray, family: str, strength: float, rng=None) -> np.ndarray:
    if family == "noise":
        out = img + rng.normal(0.0, strength, img.shape)
    elif family == "blur":
        out = ndimage.gaussian_filter(img, strength, mode="nearest")
    elif family == "contrast":
        mean = img.mean()
        out = mean + strength * (img - mean)
    else:
        raise ValueError(f"unknown distortion family {family!r}")
    return quantize(out)


def synth_corpus(seed: int, images: Sequence, levels: int, names: Optional[Sequence[str]] = None) -> SynthCorpus:
    """Distort every source image with noise, blur and contrast change.

    Each family is applied at ``levels`` increasing strengths. The
    subjective score of a distorted image is ``-level`` (higher is better).
    Images are quantized to the 8-bit grid, so writing them as PGM is
    lossless. The output depends only on ``(seed, images, levels)``.
    """
    if len(images) == 0:
        raise ShapeError("synth_corpus needs at least one source image")
    if levels < 2:
        raise ShapeError(f"levels must be >= 2, got {levels}")
    if names is None:
        names = [f"src{i:02d}" for i in range(len(images))]
    if len(set(names)) != len(images):
        raise ShapeError("source names must be unique and match the image count")

    out: Dict[str, np.ndarray] = {}
    records = []
    for i, (name, img) in enumerate(zip(names, images)):
        ref = quantize(as_gray(img))
        ref_path = f"{name}.pgm"
        out[ref_path] = ref
        for family in FAMILIES:
            for level, strength in enumerate(distortion_ladder(family, levels, i), start=1):
                # per-item stream: results do not depend on generation order
                rng = np.random.default_rng([seed, i, FAMILIES.index(family), level])
                dist_path = f"{name}_{family}_{level}.pgm"
                out[dist_path] = apply_distortion(ref, family, strength, rng)
                records.append(ManifestRecord(ref_path, dist_path, family, level, float(-level)))
    return SynthCorpus(DatasetManifest("synthetic", tuple(records)), out)


def write_corpus(corpus: SynthCorpus, outdir) -> Path:
    """Write images and ``manifest.csv`` under ``outdir``; return the manifest path."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for rel, img in corpus.images.items():
        write_image(outdir / rel, img)
    path = outdir / "manifest.csv"
    write_manifest(corpus.manifest, path)
    return path


def load_pair(manifest: DatasetManifest, record: ManifestRecord):
    return read_gray(manifest.resolve(record.ref_path)), read_gray(manifest.resolve(record.dist_path))
