"""Command-line front end: generate series, solve them, benchmark solvers.

Subcommands
-----------
gen    write a reproducible pseudo-random series to a binary file
solve  read a series file, solve it, emit t,x as CSV
bench  time solvers over a size grid, emit per-run records as CSV

File format ("LREC", version 1): magic bytes ``LREC``, version as u32 LE,
n as u64 LE, then a[n], b[n], x0 as 64-bit little-endian floats.

Exit codes: 0 success, 2 usage error, 3 malformed series file, 4 input
outside the chosen solver's domain, 5 I/O error.  LINREC_WORKERS sets the
default worker count; --workers overrides it.
"""

from __future__ import annotations

import argparse
import csv
import os
import struct
import sys
import time
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .recurrence import (
    CoefficientSeries,
    SolveMethod,
    SolveResult,
    UnsupportedInputError,
    solve,
    solve_sequential,
)
from .scan import ScanEngine

__all__ = [
    "SeriesFile",
    "SeriesFileError",
    "BenchRecord",
    "MAGIC",
    "VERSION",
    "PRESETS",
    "generate_series",
    "write_series_file",
    "read_series_file",
    "run_benchmark",
    "summarize_benchmark",
    "cmd_gen",
    "cmd_solve",
    "cmd_bench",
    "main",
]

MAGIC = b"LREC"
VERSION = 1
PRESETS = ("positive-decay", "mixed-sign", "with-zeros")

_HEADER = struct.Struct("<4sIQ")  # magic, version, n


class SeriesFileError(Exception):
    """The bytes on disk are not a valid series file."""


@dataclass(frozen=True)
class SeriesFile:
    """In-memory image of one series file: header fields plus payload."""

    version: int
    series: CoefficientSeries

    @property
    def n(self) -> int:
        return self.series.n


class _UsageError(Exception):
    """Bad invocation discovered after argparse (e.g. a broken env var)."""


# ---------------------------------------------------------------------------
# series generation and serialization


def generate_series(n: int, seed, preset: str) -> CoefficientSeries:
    """Draw a reproducible random series; (n, seed, preset) fixes every bit.

    positive-decay: a in (0, 1].  mixed-sign: a in [-2, 2] without zeros.
    with-zeros: mixed-sign plus 1% of positions (at least one) forced to 0.
    All presets draw b in [-10, 10] and x0 in [-5, 5].
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
    rng = np.random.default_rng(seed)
    if preset == "positive-decay":
        a = 1.0 - rng.random(n)
    else:
        a = rng.uniform(-2.0, 2.0, n)
        while True:  # the draw is half-open at -2, so 0.0 is possible
            zeros = a == 0.0
            if not zeros.any():
                break
            a[zeros] = rng.uniform(-2.0, 2.0, int(zeros.sum()))
        if preset == "with-zeros":
            count = max(1, round(0.01 * n))
            a[rng.choice(n, size=count, replace=False)] = 0.0
    b = rng.uniform(-10.0, 10.0, n)
    x0 = float(rng.uniform(-5.0, 5.0))
    return CoefficientSeries(a, b, x0)


def write_series_file(path, series: CoefficientSeries) -> SeriesFile:
    payload = _HEADER.pack(MAGIC, VERSION, series.n)
    payload += series.a.astype("<f8").tobytes()
    payload += series.b.astype("<f8").tobytes()
    payload += struct.pack("<d", series.x0)
    with open(path, "wb") as fh:
        fh.write(payload)
    return SeriesFile(VERSION, series)


def read_series_file(path) -> SeriesFile:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise SeriesFileError(f"{path}: truncated header ({len(raw)} bytes)")
    magic, version, n = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise SeriesFileError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise SeriesFileError(f"{path}: unsupported version {version}")
    expected = _HEADER.size + (2 * n + 1) * 8
    if len(raw) != expected:
        raise SeriesFileError(f"{path}: payload is {len(raw)} bytes, header implies {expected}")
    floats = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
    try:
        series = CoefficientSeries(floats[:n], floats[n:2 * n], float(floats[2 * n]))
    except ValueError as err:
        raise SeriesFileError(f"{path}: {err}") from err
    return SeriesFile(version, series)


# ---------------------------------------------------------------------------
# benchmark harness


@dataclass(frozen=True)
class BenchRecord:
    """One timed solve."""

    method: SolveMethod
    n: int
    run: int  # 1-based within the configured run count
    wall_time_ns: int
    worker_count: int


def run_benchmark(sizes: Sequence[int], runs: int, methods: Sequence[SolveMethod | str],
                  engine: ScanEngine, seed=0, preset: str = "positive-decay",
                  warmup_runs: int = 3) -> list[BenchRecord]:
    """Time `runs` solves per (method, n) after warm-ups, strictly in sequence.

    One series per size, derived from (seed, n), shared by every method so
    their timings are comparable.  Only the solve call itself is timed.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    if any(n < 1 for n in sizes):
        raise ValueError("sizes must all be >= 1")
    methods = [SolveMethod(m) for m in methods]
    records: list[BenchRecord] = []
    for n in sizes:
        series = generate_series(n, [seed, n], preset)
        for method in methods:
            for _ in range(warmup_runs):
                solve(series, method, engine)
            for run in range(1, runs + 1):
                start = time.perf_counter_ns()
                solve(series, method, engine)
                elapsed = time.perf_counter_ns() - start
                records.append(BenchRecord(method, n, run, max(1, elapsed), engine.worker_count))
    return records


def write_bench_csv(records: Iterable[BenchRecord], fh: IO[str]) -> None:
    writer = csv.writer(fh)
    writer.writerow(["method", "n", "run", "wall_time_ns", "worker_count"])
    for r in records:
        writer.writerow([r.method.value, r.n, r.run, r.wall_time_ns, r.worker_count])


def summarize_benchmark(records: Sequence[BenchRecord]) -> str:
    """Mean wall time per (method, n), plus sequential/pairscan ratio per n."""
    sizes = sorted({r.n for r in records})
    methods = []
    for r in records:
        if r.method not in methods:
            methods.append(r.method)
    means = {}
    for method in methods:
        for n in sizes:
            times = [r.wall_time_ns for r in records if r.method is method and r.n == n]
            if times:
                means[method, n] = sum(times) / len(times)
    with_ratio = SolveMethod.SEQUENTIAL in methods and SolveMethod.PAIRSCAN in methods
    header = ["n"] + [f"{m.value}_ms" for m in methods]
    if with_ratio:
        header.append("seq/pairscan")
    rows = [header]
    for n in sizes:
        row = [str(n)]
        for m in methods:
            mean = means.get((m, n))
            row.append(f"{mean / 1e6:.3f}" if mean is not None else "-")
        if with_ratio:
            row.append(f"{means[SolveMethod.SEQUENTIAL, n] / means[SolveMethod.PAIRSCAN, n]:.2f}")
        rows.append(row)
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in rows)


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(n: int, seed: int, preset: str, out) -> SeriesFile:
    series = generate_series(n, seed, preset)
    return write_series_file(out, series)


def cmd_solve(in_path, method: SolveMethod | str, engine: ScanEngine,
              out=None, check: bool = False) -> SolveResult:
    """Solve a series file; write t,x CSV to `out` (a path) or stdout."""
    series = read_series_file(in_path).series
    result = solve(series, SolveMethod(method), engine)
    if out is None:
        _write_solution_csv(result.x, sys.stdout)
    else:
        with open(out, "w", newline="") as fh:
            _write_solution_csv(result.x, fh)
    summary = f"n={series.n} method={result.method.value} flags={_format_flags(result.flags)}"
    if check:
        reference = solve_sequential(series)
        summary += f" max_rel_dev={_max_relative_deviation(result.x, reference.x):.3e}"
    print(summary, file=sys.stderr)
    return result


def cmd_bench(sizes: Sequence[int], runs: int, methods: Sequence[SolveMethod | str],
              engine: ScanEngine, seed: int = 0, preset: str = "positive-decay",
              out=None) -> list[BenchRecord]:
    """Run the benchmark; write record CSV to `out` or stdout, table to stderr."""
    records = run_benchmark(sizes, runs, methods, engine, seed=seed, preset=preset)
    if out is None:
        write_bench_csv(records, sys.stdout)
    else:
        with open(out, "w", newline="") as fh:
            write_bench_csv(records, fh)
    print(summarize_benchmark(records), file=sys.stderr)
    return records


def _write_solution_csv(x: np.ndarray, fh: IO[str]) -> None:
    writer = csv.writer(fh)
    writer.writerow(["t", "x"])
    for t, value in enumerate(x, start=1):
        writer.writerow([t, f"{value:.17g}"])


def _format_flags(flags: frozenset[str]) -> str:
    return ",".join(sorted(flags)) if flags else "-"


def _max_relative_deviation(x: np.ndarray, ref: np.ndarray) -> float:
    both = np.isfinite(x) & np.isfinite(ref)
    if not both.all() and not (np.isfinite(x) == np.isfinite(ref)).all():
        return float("inf")  # one saturated where the other did not
    if not both.any():
        return 0.0
    return float(np.max(np.abs(x[both] - ref[both]) / np.maximum(np.abs(ref[both]), 1.0)))


# ---------------------------------------------------------------------------
# argument parsing


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _size_list(text: str) -> list[int]:
    try:
        return [_positive_int(part) for part in text.split(",") if part]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from err


def _method_list(text: str) -> list[SolveMethod]:
    try:
        return [SolveMethod(part) for part in text.split(",") if part]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"bad method list {text!r}") from err


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linrec",
        description="Solve first-order linear recurrences x[t] = a[t]*x[t-1] + b[t].",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random series file")
    gen.add_argument("n", type=_positive_int, help="series length")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--preset", choices=PRESETS, default="positive-decay")
    gen.add_argument("--out", required=True, help="output series file")

    slv = sub.add_parser("solve", help="solve a series file, emit t,x CSV")
    slv.add_argument("input", help="series file to solve")
    slv.add_argument("--method", type=SolveMethod, choices=list(SolveMethod),
                     default=SolveMethod.PAIRSCAN)
    slv.add_argument("--workers", type=_positive_int, default=None)
    slv.add_argument("--block-size", type=_positive_int, default=4096)
    slv.add_argument("--check", action="store_true",
                     help="also solve sequentially and report the max relative deviation")
    slv.add_argument("--out", default=None, help="CSV path (default: stdout)")

    ben = sub.add_parser("bench", help="time solvers over a size grid, emit CSV records")
    ben.add_argument("--sizes", type=_size_list,
                     default=[2 ** 16, 2 ** 18, 2 ** 20, 2 ** 22, 2 ** 24],
                     help="comma-separated series lengths")
    ben.add_argument("--runs", type=_positive_int, default=30)
    ben.add_argument("--methods", type=_method_list,
                     default=[SolveMethod.SEQUENTIAL, SolveMethod.PAIRSCAN],
                     help="comma-separated subset of methods")
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--preset", choices=PRESETS, default="positive-decay")
    ben.add_argument("--workers", type=_positive_int, default=None)
    ben.add_argument("--block-size", type=_positive_int, default=4096)
    ben.add_argument("--out", default=None, help="CSV path (default: stdout)")
    return parser


def _engine_from_args(args: argparse.Namespace) -> ScanEngine:
    workers = args.workers
    if workers is None:
        raw = os.environ.get("LINREC_WORKERS", "").strip()
        if raw:
            try:
                workers = int(raw)
            except ValueError:
                raise _UsageError(f"LINREC_WORKERS must be an integer, got {raw!r}")
            if workers < 1:
                raise _UsageError(f"LINREC_WORKERS must be >= 1, got {workers}")
        else:
            workers = 1
    return ScanEngine(worker_count=workers, block_size=args.block_size)


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:  # argparse handles usage errors and --help
        return int(exit_.code or 0)
    try:
        if args.command == "gen":
            written = cmd_gen(args.n, args.seed, args.preset, args.out)
            print(f"wrote {args.out}: n={written.n} preset={args.preset} seed={args.seed}")
        elif args.command == "solve":
            cmd_solve(args.input, args.method, _engine_from_args(args),
                      out=args.out, check=args.check)
        else:
            cmd_bench(args.sizes, args.runs, args.methods, _engine_from_args(args),
                      seed=args.seed, preset=args.preset, out=args.out)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2
    except SeriesFileError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except UnsupportedInputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 4
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 5
    return 0


if __name__ == "__main__":
    sys.exit(main())
