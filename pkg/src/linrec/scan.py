"""Blocked inclusive prefix scans with a fixed, worker-independent shape.

The array is cut into blocks of ``block_size`` elements and scanned in the
classic two-pass form:

1. every block is folded left-to-right on its own (no seed),
2. the per-block totals are folded once into running carries,
3. every block after the first combines the carry that precedes it.

Passes 1 and 3 touch disjoint blocks, so they fan out across threads; pass 2
is a short serial fold over one value per block.  The combination tree is a
function of (n, block_size) only.  ``worker_count`` decides how many threads
share the block list and nothing else, so results are bit-for-bit identical
whether a scan runs on one worker or eight.

Numeric scans (cumsum, cumprod, log_cum_sum_exp, signed_log_cum_sum_exp) run
in compiled kernels that release the GIL; ``inclusive_scan`` takes any
associative Python callable and runs the same algorithm in the interpreter.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

from . import _kernels
from .signedlog import SignedLog

__all__ = [
    "ScanEngine",
    "DEFAULT_ENGINE",
    "inclusive_scan",
    "cumsum",
    "cumprod",
    "log_cum_sum_exp",
    "signed_log_cum_sum_exp",
]

T = TypeVar("T")


@dataclass(frozen=True)
class ScanEngine:
    """Execution policy for scans: thread count and block granularity.

    Changing ``worker_count`` never changes results.  Changing ``block_size``
    changes the (deterministic) rounding pattern, so comparisons that demand
    bit equality must hold it fixed.
    """

    worker_count: int = 1
    block_size: int = 4096

    def __post_init__(self) -> None:
        if not isinstance(self.worker_count, int) or self.worker_count < 1:
            raise ValueError(f"worker_count must be a positive int, got {self.worker_count!r}")
        if not isinstance(self.block_size, int) or self.block_size < 1:
            raise ValueError(f"block_size must be a positive int, got {self.block_size!r}")


DEFAULT_ENGINE = ScanEngine()


def _num_blocks(n: int, block_size: int) -> int:
    return -(-n // block_size)


def _run_spans(engine: ScanEngine, lo: int, hi: int, fn: Callable[[int, int], None]) -> None:
    """Run fn over contiguous sub-spans of the block range [lo, hi)."""
    count = hi - lo
    if count <= 0:
        return
    workers = min(engine.worker_count, count)
    if workers <= 1:
        fn(lo, hi)
        return
    quota, extra = divmod(count, workers)
    spans = []
    start = lo
    for k in range(workers):
        end = start + quota + (1 if k < extra else 0)
        spans.append((start, end))
        start = end
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, s, e) for s, e in spans]
        for fut in futures:
            fut.result()


def _block_totals(out: np.ndarray, n: int, block_size: int, nblocks: int) -> np.ndarray:
    last = np.minimum(np.arange(1, nblocks + 1) * block_size, n) - 1
    return out[last]


def _as_f64_1d(xs, name: str) -> np.ndarray:
    arr = np.ascontiguousarray(xs, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


# ---------------------------------------------------------------------------
# generic object scan


def inclusive_scan(items: Iterable[T], op: Callable[[T, T], T], engine: ScanEngine = DEFAULT_ENGINE) -> list[T]:
    """Inclusive prefix scan of items under an associative operator.

    Returns [x0, op(x0, x1), op(op(x0, x1), x2), ...].  The fold order is
    the fixed blocked shape described in the module docstring, so ops that
    are associative only up to rounding still give reproducible results.
    """
    data = list(items)
    n = len(data)
    if n == 0:
        return []
    bs = engine.block_size
    nblocks = _num_blocks(n, bs)
    out: list[T] = [None] * n  # type: ignore[list-item]
    for blk in range(nblocks):
        start = blk * bs
        end = min(start + bs, n)
        acc = data[start]
        out[start] = acc
        for i in range(start + 1, end):
            acc = op(acc, data[i])
            out[i] = acc
    if nblocks > 1:
        carry = out[min(bs, n) - 1]
        carries = [carry]
        for blk in range(1, nblocks):
            carry = op(carry, out[min((blk + 1) * bs, n) - 1])
            carries.append(carry)
        for blk in range(1, nblocks):
            start = blk * bs
            end = min(start + bs, n)
            c = carries[blk - 1]
            for i in range(start, end):
                out[i] = op(c, out[i])
    return out


# ---------------------------------------------------------------------------
# float64 specializations


def _scan_f64(xs: np.ndarray, engine: ScanEngine, block_kernel, apply_kernel, fold_totals) -> np.ndarray:
    n = xs.shape[0]
    out = np.empty(n)
    if n == 0:
        return out
    bs = engine.block_size
    nblocks = _num_blocks(n, bs)
    _run_spans(engine, 0, nblocks, lambda lo, hi: block_kernel(xs, out, bs, lo, hi))
    if nblocks > 1:
        carries = fold_totals(_block_totals(out, n, bs, nblocks))
        _run_spans(engine, 1, nblocks, lambda lo, hi: apply_kernel(out, carries, bs, lo, hi))
    return out


def _fold_lse_totals(totals: np.ndarray) -> np.ndarray:
    carries = np.empty(totals.shape[0])
    _kernels.lse_blocks(totals, carries, totals.shape[0], 0, 1)
    return carries


def cumsum(xs, engine: ScanEngine = DEFAULT_ENGINE) -> np.ndarray:
    """Inclusive running sum of a 1-D float64 array."""
    arr = _as_f64_1d(xs, "cumsum input")
    return _scan_f64(arr, engine, _kernels.cumsum_blocks, _kernels.cumsum_apply, np.cumsum)


def cumprod(xs, engine: ScanEngine = DEFAULT_ENGINE) -> np.ndarray:
    """Inclusive running product of a 1-D float64 array."""
    arr = _as_f64_1d(xs, "cumprod input")
    return _scan_f64(arr, engine, _kernels.cumprod_blocks, _kernels.cumprod_apply, np.cumprod)


def log_cum_sum_exp(xs, engine: ScanEngine = DEFAULT_ENGINE) -> np.ndarray:
    """Running log(sum(exp(...))) of log magnitudes, never leaving log space.

    out[t] = log(exp(xs[0]) + ... + exp(xs[t])).  -inf encodes a zero term
    and is the identity; NaN and +inf are rejected.
    """
    arr = _as_f64_1d(xs, "log_cum_sum_exp input")
    if np.isnan(arr).any():
        raise ValueError("log_cum_sum_exp input must not contain NaN")
    if np.isposinf(arr).any():
        raise ValueError("log_cum_sum_exp input must not contain +inf")
    return _scan_f64(arr, engine, _kernels.lse_blocks, _kernels.lse_apply, _fold_lse_totals)


def _signed_lcse(sgn: np.ndarray, lgm: np.ndarray, engine: ScanEngine) -> tuple[np.ndarray, np.ndarray]:
    """Array core of signed_log_cum_sum_exp; signs as -1.0/0.0/+1.0 floats."""
    n = sgn.shape[0]
    out_s = np.empty(n)
    out_l = np.empty(n)
    if n == 0:
        return out_s, out_l
    bs = engine.block_size
    nblocks = _num_blocks(n, bs)
    _run_spans(
        engine, 0, nblocks,
        lambda lo, hi: _kernels.slcse_blocks(sgn, lgm, out_s, out_l, bs, lo, hi),
    )
    if nblocks > 1:
        tot_s = _block_totals(out_s, n, bs, nblocks)
        tot_l = _block_totals(out_l, n, bs, nblocks)
        car_s = np.empty(nblocks)
        car_l = np.empty(nblocks)
        _kernels.slcse_blocks(tot_s, tot_l, car_s, car_l, nblocks, 0, 1)
        _run_spans(
            engine, 1, nblocks,
            lambda lo, hi: _kernels.slcse_apply(out_s, out_l, car_s, car_l, bs, lo, hi),
        )
    return out_s, out_l


def signed_log_cum_sum_exp(values: Iterable[SignedLog], engine: ScanEngine = DEFAULT_ENGINE) -> list[SignedLog]:
    """Running sum of signed log-space values: out[t] = values[0] + ... + values[t].

    The signed counterpart of log_cum_sum_exp; partial sums may pass through
    zero or flip sign and stay exactly representable.
    """
    vals = list(values)
    n = len(vals)
    sgn = np.empty(n)
    lgm = np.empty(n)
    for i, v in enumerate(vals):
        if not isinstance(v, SignedLog):
            raise TypeError(f"expected SignedLog at position {i}, got {type(v).__name__}")
        sgn[i] = v.sign
        lgm[i] = v.logmag
    out_s, out_l = _signed_lcse(sgn, lgm, engine)
    return [SignedLog(int(s), float(m)) for s, m in zip(out_s, out_l)]
