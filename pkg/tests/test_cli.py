import json
import subprocess
import sys

import numpy as np
import pytest

from sagetour.cli import main
from sagetour.dataset import load_csv
from sagetour.sage import radial_transform


@pytest.fixture()
def ball_csv(tmp_path):
    path = tmp_path / "ball.csv"
    assert main(["sample", "--n", "400", "--p", "5", "--seed", "3", "--out", str(path)]) == 0
    return path


class TestSample:
    def test_writes_loadable_csv(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sample", "--n", "50", "--p", "4", "--R", "2", "--out", str(out)]) == 0
        ds = load_csv(out)
        assert (ds.n, ds.p) == (50, 4)
        assert np.linalg.norm(ds.values, axis=1).max() <= 2.0

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["sample", "--n", "20", "--p", "3", "--seed", "5", "--out", str(a)])
        main(["sample", "--n", "20", "--p", "3", "--seed", "5", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestTour:
    def test_export_tree(self, ball_csv, tmp_path, capsys):
        out = tmp_path / "run"
        rc = main(["tour", str(ball_csv), "--gamma", "3", "--frames", "100",
                   "--seed", "7", "--out", str(out)])
        assert rc == 0
        assert "wrote 100 frames" in capsys.readouterr().out
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["frame_count"] == 100
        assert manifest["seed"] == 7
        lines = (out / "frames.jsonl").read_text().splitlines()
        assert len(lines) == 100
        rec = json.loads(lines[0])
        assert rec["params"]["gamma"] == 3.0

    def test_byte_identical_across_runs(self, ball_csv, tmp_path):
        outs = []
        for name in ("one", "two"):
            out = tmp_path / name
            assert main(["tour", str(ball_csv), "--seed", "7", "--frames", "40",
                         "--out", str(out)]) == 0
            outs.append(out)
        assert (outs[0] / "frames.jsonl").read_bytes() == (outs[1] / "frames.jsonl").read_bytes()
        assert (outs[0] / "manifest.json").read_bytes() == (outs[1] / "manifest.json").read_bytes()

    def test_pca_pipeline(self, ball_csv, tmp_path, capsys):
        out = tmp_path / "pca_run"
        rc = main(["tour", str(ball_csv), "--pca", "3", "--gamma", "2",
                   "--frames", "5", "--out", str(out)])
        assert rc == 0
        assert "pca: kept 3 components" in capsys.readouterr().out
        rec = json.loads((out / "frames.jsonl").read_text().splitlines()[0])
        assert len(rec["basis"]) == 3

    def test_svg_every(self, ball_csv, tmp_path):
        out = tmp_path / "svg_run"
        assert main(["tour", str(ball_csv), "--frames", "10", "--svg-every", "5",
                     "--out", str(out)]) == 0
        assert (out / "frame_000000.svg").exists()
        assert (out / "frame_000005.svg").exists()
        assert not (out / "frame_000001.svg").exists()

    def test_csv_format(self, ball_csv, tmp_path):
        out = tmp_path / "csv_run"
        assert main(["tour", str(ball_csv), "--frames", "3", "--format", "csv-per-frame",
                     "--out", str(out)]) == 0
        assert (out / "frame_000001.csv").exists()

    def test_missing_file_is_io_error(self, tmp_path, capsys):
        rc = main(["tour", str(tmp_path / "nope.csv")])
        assert rc == 4
        err = capsys.readouterr().err
        assert err.startswith("error: io:")
        assert "nope.csv" in err

    def test_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,note\n1,x\n2,y\n")
        assert main(["tour", str(bad)]) == 3
        assert capsys.readouterr().err.startswith("error: data:")

    def test_usage_error_exit_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["tour"])  # missing data argument
        assert exc.value.code == 2


class TestDiagnose:
    def test_synthetic_ball_passes(self, capsys):
        rc = main(["diagnose", "--synthetic-ball", "p=10", "n=100000"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "PASS" in out and "ks=" in out

    def test_p2_identity_note(self, capsys):
        rc = main(["diagnose", "--synthetic-ball", "p=2", "n=100000"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "identity" in out
        assert "PASS" in out

    def test_mistuned_fails(self, capsys):
        rc = main(["diagnose", "--synthetic-ball", "p=10", "n=50000", "--gamma", "4"])
        assert rc == 1
        assert "FAIL" in capsys.readouterr().out

    def test_data_file_source(self, ball_csv, capsys):
        rc = main(["diagnose", "--data", str(ball_csv), "--R", "1.0"])
        assert rc in (0, 1)
        assert "area-uniformity" in capsys.readouterr().out

    def test_bad_ball_spec(self, capsys):
        assert main(["diagnose", "--synthetic-ball", "q=4"]) == 3
        assert capsys.readouterr().err.startswith("error: data:")


class TestCurves:
    def test_transform_table_matches_formula(self, tmp_path, capsys):
        out = tmp_path / "c.csv"
        rc = main(["curves", "--kind", "transform", "--p", "10", "--grid", "21",
                   "--out", str(out)])
        assert rc == 0
        rows = out.read_text().strip().splitlines()[1:]
        data = np.array([[float(v) for v in row.split(",")] for row in rows])
        assert np.abs(data[:, 1] - radial_transform(data[:, 0], 10, 1.0)).max() < 1e-15

    def test_monte_carlo_column(self, tmp_path):
        out = tmp_path / "mc.csv"
        assert main(["curves", "--kind", "projected", "--p", "5", "--mc", "20000",
                     "--grid", "11", "--out", str(out)]) == 0
        header = out.read_text().splitlines()[0]
        assert header == "r,value,empirical"


class TestServe:
    def test_bad_bind_rejected(self, ball_csv, capsys):
        assert main(["serve", str(ball_csv), "--bind", "nonsense"]) == 3
        assert capsys.readouterr().err.startswith("error: data:")


def test_console_script_installed():
    result = subprocess.run([sys.executable, "-m", "sagetour.cli", "--version"],
                            capture_output=True, text=True)
    assert result.returncode == 0
    assert "sagetour" in result.stdout
