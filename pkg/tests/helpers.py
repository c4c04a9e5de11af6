"""Shared test utilities: error metrics, fold oracles, random series."""

from __future__ import annotations

import math

import numpy as np

from linrec import CoefficientSeries


def normalized_relative_error(x: np.ndarray, ref: np.ndarray) -> float:
    """max |x - ref| / max(|ref|, 1): strict for large values, absolute near 0."""
    x = np.asarray(x, dtype=np.float64)
    ref = np.asarray(ref, dtype=np.float64)
    if x.size == 0:
        return 0.0
    return float(np.max(np.abs(x - ref) / np.maximum(np.abs(ref), 1.0)))


def fold_recurrence(a, b, x0) -> list[float]:
    """Pure-Python reference fold of x[t] = a[t]*x[t-1] + b[t]."""
    x = []
    acc = float(x0)
    for ai, bi in zip(a, b):
        acc = float(ai) * acc + float(bi)
        x.append(acc)
    return x


def fold_scan(items, op):
    """Pure-Python left fold reference for inclusive scans."""
    out = []
    it = iter(items)
    try:
        acc = next(it)
    except StopIteration:
        return out
    out.append(acc)
    for item in it:
        acc = op(acc, item)
        out.append(acc)
    return out


def ulps_apart(got: float, want: float) -> float:
    """|got - want| measured in units of want's float spacing."""
    if want == got:
        return 0.0
    if want == 0.0:
        return math.inf
    return abs(got - want) / math.ulp(abs(want))


def random_series(rng: np.random.Generator, n: int, kind: str = "mixed") -> CoefficientSeries:
    """Random test series.  kinds:

    mixed       a uniform in [-2, 2] with (-1e-3, 1e-3) carved out
    with-zeros  mixed plus ~2% of positions forced to exactly 0
    decay       a uniform in (0, 1]
    """
    if kind == "decay":
        a = 1.0 - rng.random(n)
    else:
        a = rng.uniform(1e-3, 2.0, n) * rng.choice([-1.0, 1.0], n)
        if kind == "with-zeros":
            a[rng.random(n) < 0.02] = 0.0
    b = rng.uniform(-10.0, 10.0, n)
    x0 = float(rng.uniform(-5.0, 5.0))
    return CoefficientSeries(a, b, x0)
