"""Time the solvers over a size grid and print the summary table.

A shrunken version of the `linrec bench` subcommand, run in process: one
reproducible series per size, a few warm-up solves, then wall-clock timing
of the solve call alone.  On a single hardware thread the parallel scan
pays its extra passes for nothing; give it real cores (and more workers)
and the ratio column turns around as n grows.
"""

import os

from linrec import ScanEngine, run_benchmark
from linrec.cli import summarize_benchmark


def main():
    workers = os.cpu_count() or 1
    engine = ScanEngine(worker_count=workers, block_size=4096)
    print(f"timing with {workers} worker(s); sizes shrunk to keep this demo quick")
    print()

    records = run_benchmark(
        sizes=[2 ** 14, 2 ** 16, 2 ** 18, 2 ** 20],
        runs=10,
        methods=["sequential", "pairscan"],
        engine=engine,
    )
    print(summarize_benchmark(records))
    print()
    print(f"{len(records)} records; the CLI variant writes them as CSV:")
    print("  linrec bench --sizes 16384,65536 --runs 10 --out bench.csv")


if __name__ == "__main__":
    main()
