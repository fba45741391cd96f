"""Sweep the local contrast window and the saliency working width over a manifest.

    python scripts/sensitivity_sweep.py MANIFEST [--orientation lower-is-better] [--threads 4] [--out sweep.csv]

Both settings are free choices of the metric; this shows how much the
correlation with subjective scores depends on them.
"""

import argparse
import csv
import itertools
import sys

from cvssi.cli import run_records
from cvssi.dataset import load_manifest
from cvssi.evaluation import evaluate
from cvssi.metric import MetricParams, cvssi_score

WINDOWS = (3, 5, 7, 9)
SR_WIDTHS = (48, 64, 96)


def sweep(manifest, threads=1, windows=WINDOWS, widths=SR_WIDTHS):
    rows = []
    for window, width in itertools.product(windows, widths):
        params = MetricParams(window=window, sr_working_width=width)
        results, failures = run_records(manifest, lambda r, d: cvssi_score(r, d, params).score, threads)
        if failures:
            raise SystemExit(f"{len(failures)} records failed, first: {failures[0]}")
        report = evaluate(results, manifest.subjective())
        rows.append({"window": window, "sr_width": width, "srocc": report.srocc, "krocc": report.krocc,
                     "plcc": report.plcc, "rmse": report.rmse})
        print(f"window {window} sr_width {width:>3}: srocc {report.srocc:+.4f} plcc {report.plcc:+.4f}", file=sys.stderr)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("manifest")
    ap.add_argument("--orientation", default="higher-is-better", choices=("higher-is-better", "lower-is-better"))
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    rows = sweep(load_manifest(args.manifest, args.orientation), args.threads)
    f = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    with f:
        writer = csv.DictWriter(f, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)


if __name__ == "__main__":
    main()
