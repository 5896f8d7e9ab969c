# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""End-to-end tests for the cumstream commands."""

import hashlib
import json

import jsonschema
import numpy as np
import pytest

from cumstream.cli import bench_main, datagen_main, main, process_main
from cumstream.cli.common import EXIT_DATA, EXIT_OK, EXIT_USAGE, RunManifest
from cumstream.cli.datagen import sidecar_path
from cumstream.statistics import REPORT_SCHEMA, WindowReport
from cumstream.stream import StepTimings, StreamConfig, run
from cumstream.utils import WORKERS_ENV, CsvBatchSource, load_series

pytestmark = pytest.mark.integration


@pytest.fixture
def toy_csv(temp_dir):
    path = temp_dir / "toy.csv"
    path.write_text("".join(f"{v}\n" for v in range(1, 7)), encoding="utf-8")
    return path


@pytest.fixture
def generated_csv(temp_dir):
    path = temp_dir / "stream.csv"
    code = datagen_main(["--n", "3", "--window", "200", "--update", "50", "--windows", "4",
                         "--seed", "7", "-o", str(path), "-q"])
    assert code == EXIT_OK
    return path


def read_reports(path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]


class TestProcess:
    def test_toy_stream(self, toy_csv, temp_dir):
        output = temp_dir / "reports.jsonl"
        code = process_main(["--input", str(toy_csv), "--n", "1", "--order", "2",
                             "--window", "4", "--update", "2", "-o", str(output), "-q"])
        assert code == EXIT_OK
        reports = read_reports(output)
        assert [r["window"] for r in reports] == [1, 2]
        assert reports[1]["norm_c1"] == pytest.approx(4.5)
        assert reports[1]["norm_c2"] == pytest.approx(1.25)

    def test_stdout(self, toy_csv, capsys):
        code = process_main(["--input", str(toy_csv), "--n", "1", "--order", "2",
                             "--window", "4", "--update", "2", "-q"])
        assert code == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 2

    def test_report_lines_follow_schema(self, generated_csv, temp_dir):
        output = temp_dir / "reports.jsonl"
        process_main(["--input", str(generated_csv), "--n", "3", "--window", "200",
                      "--update", "50", "-o", str(output), "-q"])
        for payload in read_reports(output):
            jsonschema.validate(payload, REPORT_SCHEMA)
            assert set(payload["nu"]) == {"3", "4"}

    def test_matches_library_run(self, generated_csv, temp_dir):
        output = temp_dir / "reports.jsonl"
        process_main(["--input", str(generated_csv), "--n", "3", "--window", "200",
                      "--update", "50", "--block", "2", "--workers", "1",
                      "-o", str(output), "-q"])
        expected = []
        run(StreamConfig(n=3, d=4, t=200, t_up=50, b=2, workers=1),
            CsvBatchSource(str(generated_csv), 3, 200, 50),
            lambda report: expected.append(report.to_json()))
        assert output.read_text(encoding="utf-8").splitlines() == expected

    def test_reports_are_deterministic(self, generated_csv, temp_dir):
        digests = []
        for name in ("first.jsonl", "second.jsonl"):
            output = temp_dir / name
            process_main(["--input", str(generated_csv), "--n", "3", "--window", "200",
                          "--update", "50", "--workers", "2", "-o", str(output), "-q"])
            digests.append(hashlib.sha256(output.read_bytes()).hexdigest())
        assert digests[0] == digests[1]

    def test_dump_and_manifest(self, generated_csv, temp_dir):
        dumps = temp_dir / "dumps"
        manifest = temp_dir / "manifest.json"
        output = temp_dir / "reports.jsonl"
        code = process_main(["--input", str(generated_csv), "--n", "3", "--window", "200",
                             "--update", "50", "--dump-cumulants", str(dumps),
                             "--manifest", str(manifest), "-o", str(output), "-q"])
        assert code == EXIT_OK
        assert sorted(p.name for p in dumps.iterdir()) == [
            f"window-{w:06d}.npz" for w in range(1, 5)]
        reports = [WindowReport.from_dict(p) for p in read_reports(output)]
        last = load_series(dumps / "window-000004.npz")
        assert last[1].knorm(2) == pytest.approx(reports[-1].norm_c2, rel=1e-12)

        payload = json.loads(manifest.read_text(encoding="utf-8"))
        assert payload["command"] == "process"
        assert payload["rows_processed"] == 200 + 3 * 50
        assert len(payload["timings"]) == 4
        assert payload["frequency_hz"] > 0

    def test_update_longer_than_window(self, toy_csv):
        code = process_main(["--input", str(toy_csv), "--n", "1", "--window", "2",
                             "--update", "3", "-q"])
        assert code == EXIT_USAGE

    def test_missing_input(self, temp_dir):
        code = process_main(["--input", str(temp_dir / "absent.csv"), "--n", "1",
                             "--window", "4", "--update", "2", "-q"])
        assert code == EXIT_USAGE

    def test_malformed_csv(self, temp_dir):
        path = temp_dir / "bad.csv"
        path.write_text("1,2\n3,x\n5,6\n7,8\n", encoding="utf-8")
        code = process_main(["--input", str(path), "--n", "2", "--order", "3",
                             "--window", "2", "--update", "1", "-q"])
        assert code == EXIT_DATA

    def test_too_few_rows(self, toy_csv):
        code = process_main(["--input", str(toy_csv), "--n", "1", "--window", "10",
                             "--update", "2", "-q"])
        assert code == EXIT_DATA

    def test_constant_column_is_a_data_error(self, temp_dir, rng):
        path = temp_dir / "constant.csv"
        path.write_text("".join(f"{x:.17g},2.3\n" for x in rng.standard_normal(60)),
                        encoding="utf-8")
        code = process_main(["--input", str(path), "--n", "2", "--window", "40",
                             "--update", "10", "-o", str(temp_dir / "reports.jsonl"), "-q"])
        assert code == EXIT_DATA

    def test_missing_required_flag(self):
        with pytest.raises(SystemExit) as excinfo:
            process_main(["--n", "2"])
        assert excinfo.value.code == EXIT_USAGE


class TestDatagen:
    def test_rows_columns_and_sidecar(self, generated_csv):
        data = np.loadtxt(generated_csv, delimiter=",")
        assert data.shape == (200 + 3 * 50, 3)
        sidecar = json.loads(sidecar_path(str(generated_csv)).read_text(encoding="utf-8"))
        assert sidecar["seed"] == 7
        assert sidecar["w_max"] == 4

    def test_same_seed_same_file(self, temp_dir):
        digests = []
        for name in ("a.csv", "b.csv"):
            path = temp_dir / name
            datagen_main(["--n", "2", "--window", "30", "--update", "10", "--windows", "3",
                          "--seed", "5", "-o", str(path), "-q"])
            digests.append(hashlib.sha256(path.read_bytes()).hexdigest())
        assert digests[0] == digests[1]

    def test_header(self, temp_dir):
        path = temp_dir / "h.csv"
        datagen_main(["--n", "2", "--window", "3", "--update", "1", "--windows", "1",
                      "--seed", "1", "-o", str(path), "--header", "-q"])
        assert path.read_text(encoding="utf-8").splitlines()[0] == "x0,x1"

    def test_seed_is_required(self, temp_dir):
        with pytest.raises(SystemExit) as excinfo:
            datagen_main(["--n", "2", "--window", "30", "--update", "10", "--windows", "3",
                          "-o", str(temp_dir / "x.csv")])
        assert excinfo.value.code == EXIT_USAGE

    def test_invalid_dof(self, temp_dir):
        code = datagen_main(["--n", "2", "--window", "30", "--update", "10", "--windows", "3",
                             "--dof", "2", "--seed", "1", "-o", str(temp_dir / "x.csv"), "-q"])
        assert code == EXIT_USAGE


class TestBench:
    def test_small_grid(self, temp_dir):
        output = temp_dir / "bench.json"
        code = bench_main(["--n", "3", "--order", "3", "--block", "2", "--window", "400",
                           "--update", "20", "40", "--steps", "5", "--recalc-repeats", "1",
                           "--workers", "1", "-o", str(output), "-q"])
        assert code == EXIT_OK
        results = json.loads(output.read_text(encoding="utf-8"))["results"]
        assert [r["t_up"] for r in results] == [20, 40]
        for result in results:
            assert result["speedup"] > 0
            assert result["predicted_speedup"] > 1

    def test_skips_points_over_budget(self, temp_dir):
        output = temp_dir / "bench.json"
        code = bench_main(["--n", "3", "--order", "3", "--block", "2", "--window", "400",
                           "--update", "20", "--memory-budget", "1", "-o", str(output), "-q"])
        assert code == EXIT_OK
        assert json.loads(output.read_text(encoding="utf-8"))["results"] == []

    def test_manifest_has_no_per_window_fields(self, temp_dir, no_workers_env):
        output = temp_dir / "bench.json"
        bench_main(["--n", "3", "--order", "3", "--block", "2", "--window", "400",
                    "--update", "20", "40", "--steps", "5", "--recalc-repeats", "1",
                    "--workers", "1", "-o", str(output), "-q"])
        manifest = json.loads(output.read_text(encoding="utf-8"))
        for key in ("timings", "rows_processed", "mean_step_seconds", "frequency_hz"):
            assert key not in manifest
        assert manifest["config"]["t_up"] == [20, 40]
        assert manifest["workers"] == [1]
        assert all(result["frequency_hz"] > 0 for result in manifest["results"])

    def test_sweeps_worker_counts(self, temp_dir, no_workers_env):
        output = temp_dir / "bench.json"
        code = bench_main(["--n", "4", "--order", "3", "--block", "2", "--window", "400",
                           "--update", "40", "--steps", "5", "--recalc-repeats", "1",
                           "--workers", "1", "2", "-o", str(output), "-q"])
        assert code == EXIT_OK
        manifest = json.loads(output.read_text(encoding="utf-8"))
        assert manifest["workers"] == [1, 2]
        assert [r["workers"] for r in manifest["results"]] == [1, 2]

    def test_environment_collapses_worker_sweep(self, temp_dir, monkeypatch):
        monkeypatch.setenv(WORKERS_ENV, "1")
        output = temp_dir / "bench.json"
        bench_main(["--n", "3", "--order", "3", "--block", "2", "--window", "400",
                    "--update", "40", "--steps", "5", "--recalc-repeats", "1",
                    "--workers", "1", "2", "-o", str(output), "-q"])
        results = json.loads(output.read_text(encoding="utf-8"))["results"]
        assert [r["workers"] for r in results] == [1]


class TestMain:
    def test_dispatches(self, toy_csv, temp_dir):
        output = temp_dir / "reports.jsonl"
        code = main(["process", "--input", str(toy_csv), "--n", "1", "--order", "2",
                     "--window", "4", "--update", "2", "-o", str(output), "-q"])
        assert code == EXIT_OK
        assert len(read_reports(output)) == 2

    def test_no_arguments_prints_usage(self, capsys):
        assert main([]) == EXIT_OK
        assert "cumstream process" in capsys.readouterr().out

    def test_unknown_command(self, capsys):
        assert main(["transform"]) == EXIT_USAGE
        assert "unknown command" in capsys.readouterr().err


class TestRunManifest:
    def test_frequency_skips_priming_window(self):
        manifest = RunManifest("process", {"t_up": 10}, 1)
        manifest.add_window(StepTimings(0.0, 0.5, 0.0, 5.0), 100)
        manifest.add_window(StepTimings(0.1, 0.1, 0.0, 0.2), 10)
        manifest.add_window(StepTimings(0.1, 0.2, 0.0, 0.3), 10)
        assert manifest.mean_step_seconds == pytest.approx(0.25)
        assert manifest.frequency_hz == pytest.approx(40.0)
        assert manifest.rows_processed == 120

    def test_nothing_stepped(self):
        manifest = RunManifest("process", {"t_up": 10}, 1)
        manifest.add_window(StepTimings(0.0, 0.5, 0.0, 5.0), 100)
        assert manifest.frequency_hz == 0.0

    def test_process_manifest_keeps_per_window_fields(self):
        manifest = RunManifest("process", {"t_up": 10}, 1)
        assert {"timings", "rows_processed", "frequency_hz"} <= set(manifest.to_dict())

    def test_grid_manifest_drops_per_window_fields(self):
        payload = RunManifest("bench", {"t_up": [10, 20]}, [1, 2], per_window=False).to_dict()
        assert set(payload) == {"command", "config", "workers", "results"}
