import csv
import json
import os

import numpy as np
import pytest

from cvssi.cli import main
from cvssi.dataset import load_manifest, synth_corpus, write_corpus, write_scores
from cvssi.netpbm import write_image


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory, camera):
    out = tmp_path_factory.mktemp("corpus")
    write_corpus(synth_corpus(0, [camera[96:224, 160:288]], 3), out)
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


class TestScore:
    def test_identity(self, capsys, corpus_dir):
        ref = corpus_dir / "src00.pgm"
        code, out, _ = run(capsys, "score", ref, ref)
        assert code == 0
        result = json.loads(out)
        assert result["score"] == 0.0
        assert set(result) == {"score", "sd_lcs", "sd_gvss", "elapsed_ms"}

    def test_dimension_mismatch(self, capsys, tmp_path):
        write_image(tmp_path / "a.pgm", np.zeros((16, 16)))
        write_image(tmp_path / "b.pgm", np.zeros((16, 18)))
        code, _, err = run(capsys, "score", tmp_path / "a.pgm", tmp_path / "b.pgm")
        assert code == 2 and "dimension mismatch" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "score", tmp_path / "nope.pgm", tmp_path / "nope.pgm")
        assert code == 2 and "nope.pgm" in err

    def test_bad_weights(self, capsys, corpus_dir):
        ref = corpus_dir / "src00.pgm"
        code, _, _ = run(capsys, "score", ref, ref, "--w1", "0.5", "--w2", "0.6")
        assert code == 2

    def test_single_weight_override(self, capsys, corpus_dir):
        ref, dist = corpus_dir / "src00.pgm", corpus_dir / "src00_noise_3.pgm"
        _, out, _ = run(capsys, "score", ref, dist, "--w1", "1")
        r = json.loads(out)
        assert r["score"] == pytest.approx(r["sd_lcs"], abs=1e-15)

    def test_json_and_csv_agree(self, capsys, corpus_dir):
        ref, dist = corpus_dir / "src00.pgm", corpus_dir / "src00_blur_2.pgm"
        _, js, _ = run(capsys, "score", ref, dist)
        _, cs, _ = run(capsys, "score", ref, dist, "--format", "csv")
        a = json.loads(js)
        b = next(csv.DictReader(cs.splitlines()))
        for k in ("score", "sd_lcs", "sd_gvss"):
            assert f"{a[k]:.12g}" == f"{float(b[k]):.12g}"

    def test_dump_maps(self, capsys, corpus_dir, tmp_path):
        ref, dist = corpus_dir / "src00.pgm", corpus_dir / "src00_noise_1.pgm"
        code, _, _ = run(capsys, "score", ref, dist, "--dump-maps", tmp_path / "maps")
        assert code == 0
        names = {p.name for p in (tmp_path / "maps").iterdir()}
        for stem in ("lc_ref", "lc_dist", "vs_ref", "vs_dist", "lcs", "gvss"):
            assert {f"{stem}.pgm", f"{stem}.csv"} <= names

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2


class TestBatch:
    def test_nine_records_and_threads(self, capsys, corpus_dir, tmp_path):
        manifest = corpus_dir / "manifest.csv"
        assert run(capsys, "batch", manifest, "--out", tmp_path / "one.csv")[0] == 0
        assert run(capsys, "batch", manifest, "--threads", "4", "--out", tmp_path / "four.csv")[0] == 0
        rows = read_rows(tmp_path / "one.csv")
        assert len(rows) == 9
        assert [r["dist_path"] for r in rows] == [r.dist_path for r in load_manifest(manifest).records]
        assert (tmp_path / "one.csv").read_bytes() == (tmp_path / "four.csv").read_bytes()

    def test_missing_image_is_listed(self, capsys, corpus_dir, tmp_path):
        text = (corpus_dir / "manifest.csv").read_text()
        text += "src00.pgm,missing_7.pgm,noise,9,-9.0\n"
        (corpus_dir / "broken.csv").write_text(text)
        try:
            code, out, err = run(capsys, "batch", corpus_dir / "broken.csv")
        finally:
            os.remove(corpus_dir / "broken.csv")
        assert code == 2
        assert "record 10 (missing_7.pgm)" in err and "partial output" in err
        assert len(out.strip().splitlines()) == 10  # header + the 9 good records


class TestEval:
    def test_scores_equal_subjective(self, capsys, corpus_dir, tmp_path):
        m = load_manifest(corpus_dir / "manifest.csv")
        rows = [f"{r.ref_path},{r.dist_path},{r.distortion},{r.level},{i * 1.5 + 0.25}"
                for i, r in enumerate(m.records)]
        (tmp_path / "m.csv").write_text("ref_path,dist_path,distortion,level,subjective\n" + "\n".join(rows) + "\n")
        write_scores(tmp_path / "s.csv", [(r.dist_path, i * 1.5 + 0.25) for i, r in enumerate(m.records)])
        code, out, _ = run(capsys, "eval", tmp_path / "m.csv", tmp_path / "s.csv")
        assert code == 0
        r = json.loads(out)
        assert r["srocc"] == 1.0 and r["krocc"] == 1.0
        assert r["plcc"] == pytest.approx(1.0, abs=1e-12)
        assert r["rmse"] == pytest.approx(0.0, abs=1e-8)
        assert r["n"] == 9 and {"a1", "a2", "a3", "a4", "a5"} <= set(r)

    def test_tied_subjective_kendall(self, capsys, corpus_dir, tmp_path):
        # pseudo-MOS repeats across the three families: 9 of 36 pairs are tied
        m = load_manifest(corpus_dir / "manifest.csv")
        write_scores(tmp_path / "s.csv", [(r.dist_path, r.subjective) for r in m.records])
        _, out, _ = run(capsys, "eval", corpus_dir / "manifest.csv", tmp_path / "s.csv")
        r = json.loads(out)
        assert r["srocc"] == pytest.approx(1.0, abs=1e-12)
        assert r["krocc"] == pytest.approx(27 / 36, abs=1e-12)

    def test_external_score_file_same_path(self, capsys, corpus_dir, tmp_path):
        run(capsys, "batch", corpus_dir / "manifest.csv", "--out", tmp_path / "b.csv")
        rows = read_rows(tmp_path / "b.csv")
        # the same scores, reordered and in JSON, as a competitor tool might supply them
        (tmp_path / "ext.json").write_text(json.dumps(
            [{"dist_path": r["dist_path"], "score": float(r["score"])} for r in reversed(rows)]))
        _, a, _ = run(capsys, "eval", corpus_dir / "manifest.csv", tmp_path / "b.csv")
        _, b, _ = run(capsys, "eval", corpus_dir / "manifest.csv", tmp_path / "ext.json")
        assert json.loads(a) == json.loads(b)

    def test_join_error(self, capsys, corpus_dir, tmp_path):
        write_scores(tmp_path / "s.csv", [("src00_noise_1.pgm", 1.0)])
        code, _, err = run(capsys, "eval", corpus_dir / "manifest.csv", tmp_path / "s.csv")
        assert code == 2 and "no score for" in err

    def test_scatter(self, capsys, corpus_dir, tmp_path):
        run(capsys, "batch", corpus_dir / "manifest.csv", "--out", tmp_path / "b.csv")
        code, _, _ = run(capsys, "eval", corpus_dir / "manifest.csv", tmp_path / "b.csv",
                         "--scatter", tmp_path / "scatter.csv")
        assert code == 0
        rows = read_rows(tmp_path / "scatter.csv")
        assert len(rows) == 9 and set(rows[0]) == {"dist_path", "distortion", "objective", "mapped", "subjective"}


class TestAblate:
    def test_six_rows_match_eval(self, capsys, corpus_dir, tmp_path):
        manifest = corpus_dir / "manifest.csv"
        code, out, _ = run(capsys, "ablate", manifest)
        assert code == 0
        table = json.loads(out)
        assert [r["strategy"] for r in table] == [
            "product_mean", "product_std", "product_mad", "sum_of_means", "sum_of_mads", "sum_of_stds"]
        run(capsys, "batch", manifest, "--out", tmp_path / "b.csv")
        _, ev, _ = run(capsys, "eval", manifest, tmp_path / "b.csv")
        ev = json.loads(ev)
        row = table[-1]
        for k in ("srocc", "krocc", "plcc", "rmse"):
            assert abs(row[k] - ev[k]) <= 1e-12

    def test_deterministic(self, capsys, corpus_dir):
        a = run(capsys, "ablate", corpus_dir / "manifest.csv", "--format", "csv")[1]
        b = run(capsys, "ablate", corpus_dir / "manifest.csv", "--format", "csv", "--threads", "3")[1]
        assert a == b


class TestSynth:
    def test_writes_corpus(self, capsys, data_dir, tmp_path):
        code, out, _ = run(capsys, "synth", data_dir / "coins.pgm", "--levels", "3", "--seed", "4",
                           "--out", tmp_path / "c")
        assert code == 0 and "9 distorted" in out
        m = load_manifest(tmp_path / "c" / "manifest.csv")
        assert len(m) == 9 and m.records[0].ref_path == "coins.pgm"

    def test_requires_out(self, capsys, data_dir):
        assert run(capsys, "synth", data_dir / "coins.pgm")[0] == 2
