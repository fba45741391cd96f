"""Command-line interface.

    cvssi score REF DIST          score one pair
    cvssi batch MANIFEST          score every manifest record
    cvssi eval MANIFEST SCORES    correlate scores with subjective ratings
    cvssi ablate MANIFEST         compare the six pooling strategies
    cvssi synth IMAGE...          generate a synthetic distortion corpus

Exit codes: 0 success, 1 internal error, 2 usage or input error.
"""

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .contrast import contrast_map
from .dataset import join_scores, load_manifest, load_pair, load_scores, synth_corpus, write_corpus
from .errors import CvssiError, ShapeError
from .evaluation import evaluate
from .image import box_downsample_2x
from .metric import MetricParams, PoolingStrategy, ablate_all, cvssi_score, similarity_maps
from .netpbm import read_gray, save_map_csv, save_map_pgm
from .saliency import spectral_residual_saliency


class UsageError(CvssiError):
    pass


def params_from_args(args) -> MetricParams:
    w1, w2 = args.w1, args.w2
    if w1 is None and w2 is None:
        w1, w2 = MetricParams.w1, MetricParams.w2
    elif w2 is None:
        w2 = 1.0 - w1
    elif w1 is None:
        w1 = 1.0 - w2
    return MetricParams(c1=args.c1, c2=args.c2, w1=w1, w2=w2, window=args.window, sr_working_width=args.sr_width)


def emit(rows, fmt, out=None, single=False):
    """Write flat dicts as CSV, or as JSON (a bare object when ``single``)."""
    if fmt == "json":
        text = json.dumps(rows[0] if single else rows, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
        text = buf.getvalue()
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_score(args):
    params = params_from_args(args)
    ref, dist = read_gray(args.ref), read_gray(args.dist)
    if ref.shape != dist.shape:
        raise ShapeError(f"dimension mismatch: {ref.shape[::-1]} vs {dist.shape[::-1]}")
    elapsed = []
    for _ in range(max(1, args.repeat)):
        t0 = time.perf_counter()
        result = cvssi_score(ref, dist, params)
        elapsed.append((time.perf_counter() - t0) * 1e3)
    if args.dump_maps:
        dump_maps(Path(args.dump_maps), ref, dist, params)
    emit([{
        "score": result.score,
        "sd_lcs": result.sd_lcs,
        "sd_gvss": result.sd_gvss,
        "elapsed_ms": float(np.median(elapsed)),
    }], args.format, args.out, single=True)
    return 0


def dump_maps(outdir: Path, ref, dist, params):
    outdir.mkdir(parents=True, exist_ok=True)
    r, d = box_downsample_2x(ref), box_downsample_2x(dist)
    lcs, gvss = similarity_maps(ref, dist, params)
    maps = {
        "lc_ref": contrast_map(r, params.window),
        "lc_dist": contrast_map(d, params.window),
        "vs_ref": spectral_residual_saliency(r, params.sr_working_width),
        "vs_dist": spectral_residual_saliency(d, params.sr_working_width),
        "lcs": lcs.values,
        "gvss": gvss.values,
    }
    for name, values in maps.items():
        save_map_pgm(outdir / f"{name}.pgm", values)
        save_map_csv(outdir / f"{name}.csv", values)


def run_records(manifest, fn, threads):
    """Apply ``fn(ref, dist)`` to every record; keep manifest order.

    Returns ``(results, failures)`` where failed records have result ``None``.
    """
    def work(record):
        try:
            ref, dist = load_pair(manifest, record)
            return fn(ref, dist), None
        except (CvssiError, OSError) as exc:
            return None, str(exc)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        outcomes = list(pool.map(work, manifest.records))
    failures = [(i + 1, rec.dist_path, err) for i, (rec, (_, err)) in enumerate(zip(manifest.records, outcomes)) if err]
    return [res for res, _ in outcomes], failures


def report_failures(failures, total):
    for row, path, err in failures:
        print(f"record {row} ({path}): {err}", file=sys.stderr)
    print(f"partial output: {len(failures)} of {total} records failed", file=sys.stderr)


def cmd_batch(args):
    params = params_from_args(args)
    manifest = load_manifest(args.manifest, orientation=args.orientation, check_paths=False)
    results, failures = run_records(manifest, lambda r, d: cvssi_score(r, d, params).score, args.threads)
    scored = [(rec.dist_path, s) for rec, s in zip(manifest.records, results) if s is not None]
    emit([{"dist_path": p, "score": s} for p, s in scored], args.format, args.out)
    if failures:
        report_failures(failures, len(manifest))
        return 2
    return 0


def cmd_eval(args):
    manifest = load_manifest(args.manifest, orientation=args.orientation, check_paths=False)
    pairs = join_scores(manifest, load_scores(args.scores))
    report = evaluate(pairs.objective, pairs.subjective)
    emit([{**report.as_dict(), "orientation": manifest.orientation}], args.format, args.out, single=True)
    if args.scatter:
        mapped = report.logistic(pairs.objective)
        emit([
            {"dist_path": rec.dist_path, "distortion": rec.distortion,
             "objective": float(x), "mapped": float(p), "subjective": float(s)}
            for rec, x, p, s in zip(manifest.records, pairs.objective, mapped, pairs.subjective)
        ], "csv", args.scatter)
    return 0


def ablation_table(manifest, params, threads=1):
    """Per-strategy correlation rows plus the failures from scoring."""
    results, failures = run_records(manifest, lambda r, d: ablate_all(r, d, params), threads)
    keep = [i for i, res in enumerate(results) if res is not None]
    subjective = manifest.subjective()[keep]
    rows = []
    for strategy in PoolingStrategy:
        x = np.array([results[i][strategy] for i in keep])
        report = evaluate(x, subjective)
        rows.append({"strategy": strategy.value, "srocc": report.srocc, "krocc": report.krocc,
                     "plcc": report.plcc, "rmse": report.rmse})
    return rows, failures


def cmd_ablate(args):
    params = params_from_args(args)
    manifest = load_manifest(args.manifest, orientation=args.orientation, check_paths=False)
    rows, failures = ablation_table(manifest, params, args.threads)
    emit(rows, args.format, args.out)
    if failures:
        report_failures(failures, len(manifest))
        return 2
    return 0


def cmd_synth(args):
    if args.out is None:
        raise UsageError("synth requires --out DIR")
    names = [Path(p).stem for p in args.images]
    corpus = synth_corpus(args.seed, [read_gray(p) for p in args.images], args.levels, names)
    path = write_corpus(corpus, args.out)
    print(f"wrote {len(corpus.manifest)} distorted images and {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    metric = argparse.ArgumentParser(add_help=False)
    g = metric.add_argument_group("metric parameters")
    g.add_argument("--c1", type=float, default=MetricParams.c1)
    g.add_argument("--c2", type=float, default=MetricParams.c2)
    g.add_argument("--w1", type=float, default=None, help="contrast weight (default 0.545)")
    g.add_argument("--w2", type=float, default=None, help="saliency weight (default 0.455)")
    g.add_argument("--window", type=int, default=MetricParams.window)
    g.add_argument("--sr-width", type=int, default=MetricParams.sr_working_width)

    def common(fmt="json"):
        # a fresh parent per subcommand: argparse shares parent actions, so
        # set_defaults on one subparser would leak into the others
        c = argparse.ArgumentParser(add_help=False)
        c.add_argument("--format", choices=("json", "csv"), default=fmt)
        c.add_argument("--out", default=None, help="output file or directory (default stdout)")
        return c

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--orientation", choices=("higher-is-better", "lower-is-better"),
                      default="higher-is-better", help="direction of the subjective scale")
    data.add_argument("--threads", type=int, default=1)

    parser = argparse.ArgumentParser(prog="cvssi", description="Contrast and visual saliency similarity image quality index.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", parents=[metric, common()], help="score one image pair")
    p.add_argument("ref")
    p.add_argument("dist")
    p.add_argument("--repeat", type=int, default=1, help="time N runs, report the median")
    p.add_argument("--dump-maps", metavar="DIR", help="write intermediate maps as PGM and CSV")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("batch", parents=[metric, common("csv"), data], help="score all manifest records")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("eval", parents=[common(), data], help="correlate a score file with a manifest")
    p.add_argument("manifest")
    p.add_argument("scores")
    p.add_argument("--scatter", metavar="FILE", help="write per-image scatter data as CSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("ablate", parents=[metric, common(), data], help="pooling strategy ablation")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("synth", parents=[common()], help="generate a synthetic distortion corpus")
    p.add_argument("images", nargs="+")
    p.add_argument("--levels", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CvssiError, OSError) as exc:
        print(f"cvssi {args.command}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"cvssi {args.command}: internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
