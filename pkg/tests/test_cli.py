"""Tests for series-file I/O, the benchmark harness, and the CLI front end."""

import csv
import io
import os
import struct
import subprocess
import sys

import numpy as np
import pytest

from linrec import (
    BenchRecord,
    CoefficientSeries,
    ScanEngine,
    SeriesFileError,
    SolveMethod,
    generate_series,
    read_series_file,
    run_benchmark,
    solve,
    solve_sequential,
    write_series_file,
)
from linrec.cli import MAGIC, PRESETS, VERSION, main, summarize_benchmark, write_bench_csv


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_solution_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["t", "x"]
    ts = [int(r[0]) for r in rows[1:]]
    xs = np.array([float(r[1]) for r in rows[1:]])
    return ts, xs


class TestGenerateSeries:
    def test_deterministic(self):
        one = generate_series(500, 7, "mixed-sign")
        two = generate_series(500, 7, "mixed-sign")
        assert np.array_equal(one.a, two.a)
        assert np.array_equal(one.b, two.b)
        assert one.x0 == two.x0

    def test_seeds_differ(self):
        assert not np.array_equal(generate_series(64, 0, "mixed-sign").a,
                                  generate_series(64, 1, "mixed-sign").a)

    def test_positive_decay_range(self):
        s = generate_series(5000, 3, "positive-decay")
        assert (s.a > 0).all() and (s.a <= 1).all()

    def test_mixed_sign_range_and_no_zeros(self):
        s = generate_series(5000, 3, "mixed-sign")
        assert (np.abs(s.a) <= 2).all()
        assert (s.a != 0).all()
        assert (s.a < 0).any() and (s.a > 0).any()

    @pytest.mark.parametrize("n,expected_zeros", [(10, 1), (100, 1), (150, 2), (1000, 10)])
    def test_with_zeros_count(self, n, expected_zeros):
        s = generate_series(n, 3, "with-zeros")
        assert int((s.a == 0).sum()) == expected_zeros

    def test_common_draws(self):
        for preset in PRESETS:
            s = generate_series(2000, 11, preset)
            assert (np.abs(s.b) <= 10).all()
            assert abs(s.x0) <= 5

    def test_rejects_bad_preset(self):
        with pytest.raises(ValueError, match="preset"):
            generate_series(10, 0, "lognormal")

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            generate_series(0, 0, "mixed-sign")


class TestSeriesFile:
    def test_round_trip_bit_exact(self, tmp_path):
        s = generate_series(777, 5, "with-zeros")
        path = tmp_path / "s.lrec"
        written = write_series_file(path, s)
        assert written.version == VERSION and written.n == 777
        back = read_series_file(path)
        assert back.version == VERSION
        assert np.array_equal(back.series.a, s.a)
        assert np.array_equal(back.series.b, s.b)
        assert back.series.x0 == s.x0

    def test_layout_matches_hand_built_bytes(self, tmp_path):
        s = CoefficientSeries([2.0, 0.5], [1.0, -1.0], 1.5)
        path = tmp_path / "s.lrec"
        write_series_file(path, s)
        expected = struct.pack("<4sIQ", MAGIC, VERSION, 2)
        expected += struct.pack("<2d", 2.0, 0.5) + struct.pack("<2d", 1.0, -1.0)
        expected += struct.pack("<d", 1.5)
        assert path.read_bytes() == expected

    def test_file_size(self, tmp_path):
        n = 10 ** 6
        path = tmp_path / "big.lrec"
        write_series_file(path, generate_series(n, 0, "positive-decay"))
        assert path.stat().st_size == 16 + (2 * n + 1) * 8

    def test_write_is_deterministic(self, tmp_path):
        p1, p2 = tmp_path / "a.lrec", tmp_path / "b.lrec"
        write_series_file(p1, generate_series(128, 9, "mixed-sign"))
        write_series_file(p2, generate_series(128, 9, "mixed-sign"))
        assert p1.read_bytes() == p2.read_bytes()

    def test_rejects_bad_magic(self, tmp_path):
        path = tmp_path / "bad.lrec"
        path.write_bytes(b"NOPE" + bytes(20))
        with pytest.raises(SeriesFileError, match="magic"):
            read_series_file(path)

    def test_rejects_unknown_version(self, tmp_path):
        path = tmp_path / "v9.lrec"
        path.write_bytes(struct.pack("<4sIQ", MAGIC, 9, 0) + struct.pack("<d", 0.0))
        with pytest.raises(SeriesFileError, match="version"):
            read_series_file(path)

    def test_rejects_truncated_header(self, tmp_path):
        path = tmp_path / "short.lrec"
        path.write_bytes(b"LRE")
        with pytest.raises(SeriesFileError, match="truncated"):
            read_series_file(path)

    def test_rejects_truncated_payload(self, tmp_path):
        path = tmp_path / "cut.lrec"
        write_series_file(path, CoefficientSeries([1.0, 2.0], [3.0, 4.0], 0.0))
        raw = path.read_bytes()
        path.write_bytes(raw[:-8])
        with pytest.raises(SeriesFileError, match="bytes"):
            read_series_file(path)

    def test_rejects_trailing_bytes(self, tmp_path):
        path = tmp_path / "fat.lrec"
        write_series_file(path, CoefficientSeries([1.0], [2.0], 0.0))
        path.write_bytes(path.read_bytes() + b"\x00")
        with pytest.raises(SeriesFileError):
            read_series_file(path)

    def test_rejects_nonfinite_payload(self, tmp_path):
        path = tmp_path / "nan.lrec"
        payload = struct.pack("<4sIQ", MAGIC, VERSION, 1)
        payload += struct.pack("<3d", float("nan"), 0.0, 1.0)
        path.write_bytes(payload)
        with pytest.raises(SeriesFileError):
            read_series_file(path)


class TestRunBenchmark:
    def test_record_cardinality(self):
        records = run_benchmark([64, 128], 2, ["sequential", "pairscan"],
                                ScanEngine(1, 4096), warmup_runs=1)
        assert len(records) == 2 * 2 * 2
        assert {(r.method, r.n) for r in records} == {
            (m, n) for m in (SolveMethod.SEQUENTIAL, SolveMethod.PAIRSCAN) for n in (64, 128)
        }

    def test_runs_numbered_from_one(self):
        records = run_benchmark([32], 5, ["pairscan"], ScanEngine(1, 4096), warmup_runs=0)
        assert [r.run for r in records] == [1, 2, 3, 4, 5]

    def test_positive_wall_times_and_worker_count(self):
        records = run_benchmark([1024], 3, ["sequential"], ScanEngine(2, 256), warmup_runs=1)
        assert all(r.wall_time_ns >= 1 for r in records)
        assert all(r.worker_count == 2 for r in records)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            run_benchmark([64], 0, ["pairscan"], ScanEngine(1, 4096))
        with pytest.raises(ValueError):
            run_benchmark([0], 1, ["pairscan"], ScanEngine(1, 4096))

    def test_csv_columns(self):
        records = [BenchRecord(SolveMethod.PAIRSCAN, 64, 1, 12345, 4)]
        buf = io.StringIO()
        write_bench_csv(records, buf)
        rows = list(csv.reader(io.StringIO(buf.getvalue())))
        assert rows[0] == ["method", "n", "run", "wall_time_ns", "worker_count"]
        assert rows[1] == ["pairscan", "64", "1", "12345", "4"]

    def test_summary_has_ratio_only_with_both_methods(self):
        both = run_benchmark([64], 1, ["sequential", "pairscan"],
                             ScanEngine(1, 4096), warmup_runs=0)
        assert "seq/pairscan" in summarize_benchmark(both)
        alone = run_benchmark([64], 1, ["pairscan"], ScanEngine(1, 4096), warmup_runs=0)
        assert "seq/pairscan" not in summarize_benchmark(alone)


class TestCliSolve:
    def test_gen_then_solve_stdout(self, tmp_path, capsys):
        path = tmp_path / "s.lrec"
        code, out, _ = run_cli(["gen", "200", "--seed", "4", "--out", str(path)], capsys)
        assert code == 0 and f"wrote {path}" in out
        code, out, err = run_cli(["solve", str(path)], capsys)
        assert code == 0
        ts, xs = parse_solution_csv(out)
        assert ts == list(range(1, 201))
        series = read_series_file(path).series
        assert np.array_equal(xs, solve(series, "pairscan", ScanEngine(1, 4096)).x)
        assert "n=200 method=pairscan" in err

    def test_solve_to_file(self, tmp_path, capsys):
        series_path, out_path = tmp_path / "s.lrec", tmp_path / "x.csv"
        run_cli(["gen", "64", "--out", str(series_path)], capsys)
        code, out, _ = run_cli(
            ["solve", str(series_path), "--method", "sequential", "--out", str(out_path)],
            capsys)
        assert code == 0 and out == ""
        ts, xs = parse_solution_csv(out_path.read_text())
        series = read_series_file(series_path).series
        assert np.array_equal(xs, solve_sequential(series).x)

    def test_check_reports_deviation(self, tmp_path, capsys):
        path = tmp_path / "s.lrec"
        run_cli(["gen", "1000", "--preset", "mixed-sign", "--out", str(path)], capsys)
        code, _, err = run_cli(["solve", str(path), "--check"], capsys)
        assert code == 0
        dev = float(err.split("max_rel_dev=")[1].split()[0])
        assert dev <= 1e-10

    def test_missing_input_is_io_error(self, tmp_path, capsys):
        code, _, err = run_cli(["solve", str(tmp_path / "absent.lrec")], capsys)
        assert code == 5 and "error" in err

    def test_malformed_file_exit_code(self, tmp_path, capsys):
        path = tmp_path / "junk.lrec"
        path.write_bytes(b"JUNKJUNKJUNKJUNKJUNK")
        code, _, err = run_cli(["solve", str(path)], capsys)
        assert code == 3 and "magic" in err

    def test_unsupported_input_exit_code(self, tmp_path, capsys):
        path = tmp_path / "z.lrec"
        run_cli(["gen", "100", "--preset", "with-zeros", "--out", str(path)], capsys)
        code, _, err = run_cli(["solve", str(path), "--method", "logspace"], capsys)
        assert code == 4 and "pairscan" in err  # the message points at the fallback

    def test_usage_errors(self, tmp_path, capsys):
        assert run_cli(["solve"], capsys)[0] == 2  # missing input
        assert run_cli(["gen", "0", "--out", str(tmp_path / "s")], capsys)[0] == 2
        assert run_cli(["gen", "4", "--preset", "nope", "--out", str(tmp_path / "s")],
                       capsys)[0] == 2
        path = tmp_path / "ok.lrec"
        run_cli(["gen", "4", "--out", str(path)], capsys)
        assert run_cli(["solve", str(path), "--method", "newton"], capsys)[0] == 2

    def test_help_exits_zero(self, capsys):
        assert run_cli(["--help"], capsys)[0] == 0


class TestCliBench:
    def test_bench_csv_and_summary(self, tmp_path, capsys):
        code, out, err = run_cli(
            ["bench", "--sizes", "256,512", "--runs", "2", "--methods",
             "sequential,pairscan", "--block-size", "128"], capsys)
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["method", "n", "run", "wall_time_ns", "worker_count"]
        assert len(rows) == 1 + 2 * 2 * 2
        assert "seq/pairscan" in err

    def test_bench_to_file(self, tmp_path, capsys):
        out_path = tmp_path / "bench.csv"
        code, out, _ = run_cli(
            ["bench", "--sizes", "128", "--runs", "1", "--methods", "pairscan",
             "--out", str(out_path)], capsys)
        assert code == 0 and out == ""
        rows = list(csv.reader(io.StringIO(out_path.read_text())))
        assert len(rows) == 2

    def test_workers_env_var(self, capsys, monkeypatch):
        monkeypatch.setenv("LINREC_WORKERS", "3")
        _, out, _ = run_cli(["bench", "--sizes", "64", "--runs", "1",
                             "--methods", "pairscan"], capsys)
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[1][4] == "3"

    def test_workers_flag_overrides_env(self, capsys, monkeypatch):
        monkeypatch.setenv("LINREC_WORKERS", "3")
        _, out, _ = run_cli(["bench", "--sizes", "64", "--runs", "1",
                             "--methods", "pairscan", "--workers", "2"], capsys)
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[1][4] == "2"

    def test_bad_workers_env_is_usage_error(self, capsys, monkeypatch):
        monkeypatch.setenv("LINREC_WORKERS", "many")
        code, _, err = run_cli(["bench", "--sizes", "64", "--runs", "1",
                                "--methods", "pairscan"], capsys)
        assert code == 2 and "LINREC_WORKERS" in err
        monkeypatch.setenv("LINREC_WORKERS", "0")
        assert run_cli(["bench", "--sizes", "64", "--runs", "1",
                        "--methods", "pairscan"], capsys)[0] == 2


def test_module_entry_point(tmp_path):
    series_path = tmp_path / "s.lrec"
    gen = subprocess.run([sys.executable, "-m", "linrec", "gen", "32",
                          "--out", str(series_path)],
                         capture_output=True, text=True, env=dict(os.environ))
    assert gen.returncode == 0, gen.stderr
    slv = subprocess.run([sys.executable, "-m", "linrec", "solve", str(series_path),
                          "--method", "sequential"],
                         capture_output=True, text=True, env=dict(os.environ))
    assert slv.returncode == 0, slv.stderr
    assert slv.stdout.splitlines()[0].strip() == "t,x"
