import json
import os
import subprocess
import sys

import pytest

RUN_ENV = {**os.environ}


def run_cli(args, env_extra=None, cwd=None):
    env = {**RUN_ENV, **(env_extra or {})}
    return subprocess.run(
        [sys.executable, "-m", "signedbalance", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=cwd,
    )


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "tri.txt"
    path.write_text("a b +\nb c +\na c -\n")
    return str(path)


@pytest.fixture
def layered_file(tmp_path):
    path = tmp_path / "layers.txt"
    path.write_text(
        "# two yearly layers\n"
        "1944 a b +\n1944 b c +\n1944 a c -\n"
        "1950 a b +\n1950 b c +\n1950 a c +\n"
    )
    return str(path)


@pytest.fixture
def planted_file(tmp_path):
    path = tmp_path / "planted.txt"
    out = run_cli(
        ["generate", str(path), "--nodes", "14", "--factions", "2",
         "--density", "1.0", "--noise", "0.1", "--seed", "3"]
    )
    assert out.returncode == 0
    return str(path)


class TestMeasure:
    def test_triangle_all_metrics(self, triangle_file):
        out = run_cli(["measure", triangle_file, "--metric", "all"])
        assert out.returncode == 0
        payload = json.loads(out.stdout)
        metrics = payload["results"][0]["metrics"]
        assert metrics["weak"] == pytest.approx(0.058926, abs=1e-4)
        assert metrics["strong"] == pytest.approx(0.019240, abs=1e-4)
        assert metrics["eb"] == pytest.approx(0.18640, abs=1e-4)
        assert metrics["sa"] == pytest.approx(0.92593, abs=1e-4)
        assert payload["manifest"]["command"] == "measure"
        assert payload["manifest"]["parameters"]["alpha"] == 2.0

    def test_all_positive_layer(self, tmp_path):
        path = tmp_path / "pos.txt"
        path.write_text("a b +\nb c +\na c +\n")
        out = run_cli(["measure", str(path), "--metric", "all"])
        metrics = json.loads(out.stdout)["results"][0]["metrics"]
        assert metrics["weak"] == 0.0
        assert metrics["strong"] == 0.0
        assert metrics["eb"] == pytest.approx(0.0, abs=1e-12)
        assert metrics["sa"] == 1.0

    def test_layered_input_ordered(self, layered_file):
        out = run_cli(["measure", layered_file])
        results = json.loads(out.stdout)["results"]
        assert [r["layer"] for r in results] == ["1944", "1950"]
        assert results[0]["metrics"]["weak"] > 0.0
        assert results[1]["metrics"]["weak"] == 0.0

    def test_empty_file_exit_2(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("# nothing here\n")
        out = run_cli(["measure", str(path)])
        assert out.returncode == 2
        assert "no data lines" in out.stderr

    def test_missing_file_exit_2(self):
        out = run_cli(["measure", "/nonexistent/file.txt"])
        assert out.returncode == 2

    def test_parse_error_has_line_number(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("a b +\na b -\n")
        out = run_cli(["measure", str(path)])
        assert out.returncode == 2
        assert "line 2" in out.stderr

    def test_single_metric(self, triangle_file):
        out = run_cli(["measure", triangle_file, "--metric", "weak"])
        metrics = json.loads(out.stdout)["results"][0]["metrics"]
        assert set(metrics) == {"weak"}


class TestNullTest:
    def test_planted_eta_below_one(self, planted_file):
        out = run_cli(
            ["null-test", planted_file, "--metric", "strong", "--samples", "20", "--seed", "1"]
        )
        assert out.returncode == 0
        rep = json.loads(out.stdout)["results"][0]["eta"]["strong"]
        assert rep["eta_defined"] and rep["eta"] < 1.0

    def test_all_positive_flagged_undefined(self, tmp_path):
        path = tmp_path / "pos.txt"
        path.write_text("a b +\nb c +\na c +\n")
        out = run_cli(["null-test", str(path), "--metric", "weak", "--samples", "5"])
        rep = json.loads(out.stdout)["results"][0]["eta"]["weak"]
        assert rep["eta_defined"] is False
        assert rep["eta"] is None
        assert rep["b_obs"] == 0.0

    def test_fixed_seed_byte_identical(self, planted_file):
        args = ["null-test", planted_file, "--metric", "all", "--samples", "10", "--seed", "7"]
        a = run_cli(args)
        b = run_cli(args)
        assert a.stdout == b.stdout

    def test_dump_samples(self, triangle_file):
        out = run_cli(
            ["null-test", triangle_file, "--metric", "weak", "--samples", "6", "--dump-samples"]
        )
        rep = json.loads(out.stdout)["results"][0]["eta"]["weak"]
        assert len(rep["null_values"]) == 6


class TestPredictLoo:
    def test_planted_beats_baseline(self, planted_file):
        out = run_cli(["predict-loo", planted_file, "--metric", "weak"])
        assert out.returncode == 0
        summary = json.loads(out.stdout)["results"][0]["prediction"]["summary"]
        assert summary["accuracy"] > summary["baseline_accuracy"]

    def test_matching_only_net_predicts_positive(self, tmp_path):
        path = tmp_path / "matching.txt"
        path.write_text("a b +\nc d -\ne f -\n")
        out = run_cli(["predict-loo", str(path), "--metric", "strong"])
        pred = json.loads(out.stdout)["results"][0]["prediction"]
        assert all(rec["predicted_sign"] == 1 for rec in pred["edges"])

    def test_deterministic_rerun(self, planted_file):
        a = run_cli(["predict-loo", planted_file, "--metric", "strong"])
        b = run_cli(["predict-loo", planted_file, "--metric", "strong"])
        assert a.stdout == b.stdout


class TestPredictMulti:
    def test_defaults_echoed_in_manifest(self, planted_file):
        out = run_cli(
            ["predict-multi", planted_file, "--metric", "strong", "--remove-frac", "0.2",
             "--reps", "2", "--steps", "2000", "--tau", "300", "--seed", "5"]
        )
        assert out.returncode == 0
        manifest = json.loads(out.stdout)["manifest"]
        assert manifest["parameters"]["t0"] == 0.1
        assert manifest["parameters"]["steps"] == 2000
        payload = json.loads(out.stdout)
        frac = payload["results"][0]["fractions"][0]
        assert frac["reps"] == 2
        assert 0.0 <= frac["accuracy_mean"] <= 1.0

    def test_default_schedule_matches_contract(self, planted_file):
        # only inspect the parser defaults, without running a million steps
        from signedbalance.cli import build_parser

        args = build_parser().parse_args(["predict-multi", planted_file])
        assert args.t0 == 0.1
        assert args.tau == 1e4
        assert args.steps == 1_000_000
        assert args.reps == 100

    def test_csv_curves(self, planted_file, tmp_path):
        csv_path = tmp_path / "curves.csv"
        out = run_cli(
            ["predict-multi", planted_file, "--metric", "strong",
             "--remove-frac", "0.2,0.4", "--reps", "2", "--steps", "1500",
             "--tau", "200", "--seed", "5", "--csv", str(csv_path)]
        )
        assert out.returncode == 0
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0].startswith("layer,metric,remove_fraction")
        assert len(lines) == 3

    def test_seeded_rerun_identical(self, planted_file):
        args = ["predict-multi", planted_file, "--metric", "weak", "--remove-frac", "0.3",
                "--reps", "2", "--steps", "1500", "--tau", "200", "--seed", "9"]
        a = run_cli(args)
        b = run_cli(args)
        assert a.stdout == b.stdout

    def test_bad_fraction_exit_2(self, planted_file):
        out = run_cli(["predict-multi", planted_file, "--remove-frac", "1.5", "--steps", "10"])
        assert out.returncode == 2


class TestGenerate:
    def test_round_trips_through_measure(self, tmp_path):
        path = tmp_path / "gen.txt"
        out = run_cli(["generate", str(path), "--nodes", "10", "--factions", "2",
                       "--density", "1.0", "--noise", "0.0", "--seed", "4"])
        assert out.returncode == 0
        text = path.read_text()
        assert text.startswith("# manifest: ")
        measured = run_cli(["measure", str(path), "--metric", "strong"])
        metrics = json.loads(measured.stdout)["results"][0]["metrics"]
        assert metrics["strong"] <= 1e-10

    def test_same_seed_same_file(self, tmp_path):
        p1, p2 = tmp_path / "g1.txt", tmp_path / "g2.txt"
        run_cli(["generate", str(p1), "--nodes", "12", "--seed", "8"])
        run_cli(["generate", str(p2), "--nodes", "12", "--seed", "8"])
        assert p1.read_text() == p2.read_text()


class TestVerify:
    def test_quick_passes(self):
        out = run_cli(["verify", "--level", "quick"])
        assert out.returncode == 0
        payload = json.loads(out.stdout)
        assert payload["passed"] is True
        assert all(c["passed"] for c in payload["checks"])


class TestDeterminismAcrossThreadBudget:
    def test_thread_env_does_not_change_output(self, planted_file):
        args = ["null-test", planted_file, "--metric", "all", "--samples", "8", "--seed", "2"]
        a = run_cli(args, env_extra={"SIGNEDBALANCE_THREADS": "1"})
        b = run_cli(args, env_extra={"SIGNEDBALANCE_THREADS": "8"})
        assert a.stdout == b.stdout

    def test_bad_thread_env_exit_2(self, triangle_file):
        out = run_cli(["measure", triangle_file], env_extra={"SIGNEDBALANCE_THREADS": "zero"})
        assert out.returncode == 2


class TestOutputFile:
    def test_output_flag_writes_file(self, triangle_file, tmp_path):
        dest = tmp_path / "out.json"
        out = run_cli(["measure", triangle_file, "--output", str(dest)])
        assert out.returncode == 0
        assert out.stdout == ""
        payload = json.loads(dest.read_text())
        assert payload["manifest"]["command"] == "measure"
