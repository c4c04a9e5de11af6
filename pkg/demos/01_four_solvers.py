"""Solve one recurrence four ways and watch where each route gives up.

x_t = a_t * x_{t-1} + b_t looks inherently serial, but the package offers
four interchangeable solvers: a plain sequential fold, a division-based
prefix form, a log-domain form, and a blocked parallel scan over affine
carry pairs.  On clean inputs they agree to near machine precision; on
awkward inputs (zero coefficients) only some of them apply.
"""

import numpy as np

from linrec import (
    CoefficientSeries,
    SolveMethod,
    UnsupportedInputError,
    solve,
    solve_sequential,
)


def main():
    rng = np.random.default_rng(42)
    n = 2000
    a = rng.uniform(0.05, 1.95, n) * rng.choice([-1.0, 1.0], n)
    b = rng.uniform(-10.0, 10.0, n)
    series = CoefficientSeries(a, b, x0=1.0)

    print(f"series: n={n}, a in [{a.min():.2f}, {a.max():.2f}], x0={series.x0}")
    print()

    reference = solve_sequential(series).x
    print(f"{'method':>10}  {'max normalized deviation':>25}  flags")
    for method in SolveMethod:
        result = solve(series, method)
        dev = np.max(np.abs(result.x - reference) / np.maximum(np.abs(reference), 1.0))
        flags = ",".join(sorted(result.flags)) or "-"
        print(f"{method.value:>10}  {dev:>25.3e}  {flags}")

    print()
    print("now zero out one coefficient (the recurrence forgets its past there):")
    a[n // 2] = 0.0
    series = CoefficientSeries(a, b, x0=1.0)
    reference = solve_sequential(series).x
    for method in SolveMethod:
        try:
            result = solve(series, method)
            dev = np.max(np.abs(result.x - reference) / np.maximum(np.abs(reference), 1.0))
            print(f"{method.value:>10}  deviation {dev:.3e}")
        except UnsupportedInputError as err:
            print(f"{method.value:>10}  refused: {err}")


if __name__ == "__main__":
    main()
