"""Stream a recurrence in pieces: carries make chunk order irrelevant.

Any contiguous run of steps collapses to an affine map x -> A*x + B (its
"carry").  Carries compose associatively, so a series can be solved chunk
by chunk, with each chunk handed only the running value, and the stitched
answer matches the monolithic solve.  This is how you process series that
arrive incrementally or do not fit in memory at once.
"""

import numpy as np

from linrec import (
    IDENTITY_CARRY,
    CoefficientSeries,
    chunk_carry,
    compose_carries,
    solve,
    solve_chunked,
)


def main():
    rng = np.random.default_rng(7)
    n = 100_000
    a = rng.uniform(0.05, 1.95, n) * rng.choice([-1.0, 1.0], n)
    b = rng.uniform(-10.0, 10.0, n)
    series = CoefficientSeries(a, b, x0=2.5)

    # carve the series into uneven chunks, as a stream might deliver them
    cuts = np.sort(rng.choice(np.arange(1, n), size=15, replace=False))
    chunks = [CoefficientSeries(aa, bb, 0.0)
              for aa, bb in zip(np.split(a, cuts), np.split(b, cuts))]
    print(f"n = {n} split into {len(chunks)} chunks, "
          f"sizes {min(c.n for c in chunks)}..{max(c.n for c in chunks)}")
    print()

    # each chunk summarizes to one affine pair; composing them left to right
    # gives the same map as summarizing the whole series at once
    composed = IDENTITY_CARRY
    for chunk in chunks:
        composed = compose_carries(composed, chunk_carry(chunk))
    whole = chunk_carry(series)
    print(f"composed carry:     A={composed.A:.6e}  B={composed.B:.6e}")
    print(f"whole-series carry: A={whole.A:.6e}  B={whole.B:.6e}")
    print(f"final value via carry:  {composed.apply(series.x0):.6e}")
    print()

    mono = solve(series, "pairscan")
    streamed = solve_chunked(chunks, series.x0, "pairscan")
    dev = np.max(np.abs(streamed.x - mono.x) / np.maximum(np.abs(mono.x), 1.0))
    print(f"solve_chunked vs monolithic: max normalized deviation {dev:.3e}")
    print(f"final element both ways: {streamed.x[-1]:.6e} / {mono.x[-1]:.6e}")


if __name__ == "__main__":
    main()
