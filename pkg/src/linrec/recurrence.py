"""Solvers for the first-order linear recurrence x[t] = a[t]*x[t-1] + b[t].

Four routes to the same sequence, with different trade-offs:

``solve_sequential``
    The literal one-element-at-a-time fold.  Ground truth for everything
    else, and the fastest option on a single core.
``solve_direct``
    Closed form x = cumprod(a) * (x0 + cumsum(b / cumprod(a))).  Two scans
    and two elementwise passes, but the division by the running product
    overflows or underflows once |prod(a)| drifts far from 1.
``solve_logspace``
    The same closed form evaluated in signed log space, so the running
    product only ever appears as a sum of logs.  Stable across hundreds of
    orders of magnitude; requires every a[t] to be nonzero.
``solve_pairscan``
    Scans the affine maps (A, B) : x -> A*x + B, one per step, under
    composition.  Handles zeros and negatives natively and parallelizes the
    same way as the other scans.

All parallel routes share the blocked scan engine, so outputs are
bit-identical across worker counts.  Overflow saturates to +-inf and sets a
flag instead of raising; a zero coefficient where a method must divide (or
take a log) raises UnsupportedInputError naming the first offending index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .scan import DEFAULT_ENGINE, ScanEngine, _num_blocks, _run_spans, _signed_lcse, cumprod, cumsum

__all__ = [
    "CoefficientSeries",
    "SolveResult",
    "SolveMethod",
    "Carry",
    "IDENTITY_CARRY",
    "UnsupportedInputError",
    "FLAG_OVERFLOW_SATURATED",
    "FLAG_CANCELLATION_HEAVY",
    "CANCELLATION_RTOL",
    "solve",
    "solve_sequential",
    "solve_direct",
    "solve_logspace",
    "solve_pairscan",
    "solve_chunked",
    "compose_carries",
    "chunk_carry",
    "expand_element",
]

FLAG_OVERFLOW_SATURATED = "overflow-saturated"
FLAG_CANCELLATION_HEAVY = "cancellation-heavy"

# An element is cancellation-heavy when it is this far below the series peak.
CANCELLATION_RTOL = 1e-8


class UnsupportedInputError(ValueError):
    """A series lies outside the chosen solver's domain.

    ``index`` is the 0-based position of the first offending coefficient
    when one exists; ``fragment`` is the chunk number when raised from
    solve_chunked.
    """

    def __init__(self, message: str, index: int | None = None, fragment: int | None = None):
        super().__init__(message)
        self.index = index
        self.fragment = fragment


class SolveMethod(Enum):
    SEQUENTIAL = "sequential"
    DIRECT = "direct"
    LOGSPACE = "logspace"
    PAIRSCAN = "pairscan"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, eq=False)
class CoefficientSeries:
    """One recurrence instance: coefficients a, inputs b, initial value x0.

    a and b are equal-length 1-D arrays of finite float64; x0 is a finite
    float.  Arrays are copied to contiguous float64 on construction.
    """

    a: np.ndarray
    b: np.ndarray
    x0: float

    def __post_init__(self) -> None:
        a = np.ascontiguousarray(self.a, dtype=np.float64)
        b = np.ascontiguousarray(self.b, dtype=np.float64)
        if a.ndim != 1 or b.ndim != 1:
            raise ValueError("a and b must be one-dimensional")
        if a.shape[0] != b.shape[0]:
            raise ValueError(f"a and b lengths differ: {a.shape[0]} != {b.shape[0]}")
        if not np.isfinite(a).all():
            raise ValueError("all coefficients a must be finite")
        if not np.isfinite(b).all():
            raise ValueError("all inputs b must be finite")
        x0 = float(self.x0)
        if not math.isfinite(x0):
            raise ValueError(f"x0 must be finite, got {x0!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "x0", x0)

    @property
    def n(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Solver output: the sequence x, the method used, diagnostic flags.

    flags is a frozenset drawn from {overflow-saturated, cancellation-heavy}.
    Every x entry is finite unless overflow-saturated is present.  trace
    carries solver intermediates when requested (see solve_logspace).
    """

    x: np.ndarray
    method: SolveMethod
    flags: frozenset[str]
    trace: dict | None = None


@dataclass(frozen=True)
class Carry:
    """A chunk of the recurrence folded to the affine map x -> A*x + B."""

    A: float
    B: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", float(self.A))
        object.__setattr__(self, "B", float(self.B))

    def apply(self, x: float) -> float:
        return self.A * x + self.B


IDENTITY_CARRY = Carry(1.0, 0.0)


def compose_carries(c1: Carry, c2: Carry) -> Carry:
    """Sequence two carries: c1 acts first, c2 second."""
    return Carry(c2.A * c1.A, c2.A * c1.B + c2.B)


def chunk_carry(s: CoefficientSeries) -> Carry:
    """Fold a whole series into one carry; x0 is ignored.

    Exact left-to-right composition of the per-step carries (a[i], b[i]):
    A is the product of a and B is the final element of the x0 = 0 solve.
    """
    n = s.n
    if n == 0:
        return IDENTITY_CARRY
    carry_a = np.empty(1)
    carry_b = np.empty(1)
    _kernels.carry_fold_blocks(s.a, s.b, n, 0, 1, carry_a, carry_b)
    return Carry(carry_a[0], carry_b[0])


def _first_zero(a: np.ndarray, method: str) -> None:
    zeros = np.flatnonzero(a == 0.0)
    if zeros.size:
        i = int(zeros[0])
        raise UnsupportedInputError(
            f"{method} requires nonzero coefficients, but a[{i}] == 0 "
            "(use pairscan, which handles zeros natively)",
            index=i,
        )


def _output_flags(x: np.ndarray) -> set[str]:
    if np.isfinite(x).all():
        return set()
    return {FLAG_OVERFLOW_SATURATED}


def solve_sequential(s: CoefficientSeries) -> SolveResult:
    """One-step-at-a-time fold; the oracle the other solvers are held to."""
    n = s.n
    x = np.empty(n)
    if n:
        _kernels.recurrence_blocks(s.a, s.b, x, n, 0, 1, np.array([s.x0]))
    return SolveResult(x, SolveMethod.SEQUENTIAL, frozenset(_output_flags(x)))


def solve_direct(s: CoefficientSeries, engine: ScanEngine = DEFAULT_ENGINE) -> SolveResult:
    """Closed-form solve: cumprod(a) * (x0 + cumsum(b / cumprod(a))).

    Accurate only while the running product stays within roughly e^(+-30)
    of 1; beyond that the division saturates and the overflow flag is set.
    """
    _first_zero(s.a, "direct")
    prods = cumprod(s.a, engine)
    with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
        sums = cumsum(s.b / prods, engine)
        x = prods * (s.x0 + sums)
    return SolveResult(x, SolveMethod.DIRECT, frozenset(_output_flags(x)))


def solve_logspace(s: CoefficientSeries, engine: ScanEngine = DEFAULT_ENGINE, *, trace: bool = False) -> SolveResult:
    """Closed-form solve carried out in signed log space.

    Writes the running product as a signed cumulative log, forms the terms
    log|b[t]| - logcumprod, prepends x0, takes a signed running log-space
    sum, drops the leading element, adds the cumulative log back in and
    exponentiates.  The running product never materializes, so spans of
    hundreds of orders of magnitude pass through untouched; only the final
    x[t] can saturate to +-inf (flagged, not raised).

    Elements whose true value is more than a factor of CANCELLATION_RTOL
    below the series peak arrive through near-total cancellation of large
    opposing terms; they are still returned but flagged cancellation-heavy.

    With ``trace=True`` the result carries the intermediates: the signed
    cumulative log of a (a_star_*) and the running log-space sum of the
    terms without the x0 seed (b_star_*).
    """
    _first_zero(s.a, "logspace")
    n = s.n
    if n == 0:
        return SolveResult(np.empty(0), SolveMethod.LOGSPACE, frozenset())
    sign_a = np.sign(s.a)
    with np.errstate(divide="ignore"):
        log_abs_a = np.log(np.abs(s.a))
        log_abs_b = np.log(np.abs(s.b))  # -inf where b == 0: zero mass
    astar_sign = cumprod(sign_a, engine)
    astar_log = cumsum(log_abs_a, engine)
    term_sign = np.sign(s.b) * astar_sign
    term_log = log_abs_b - astar_log

    seq_s = np.empty(n + 1)
    seq_l = np.empty(n + 1)
    seq_s[0] = 0.0 if s.x0 == 0.0 else math.copysign(1.0, s.x0)
    seq_l[0] = -math.inf if s.x0 == 0.0 else math.log(abs(s.x0))
    seq_s[1:] = term_sign
    seq_l[1:] = term_log
    run_s, run_l = _signed_lcse(seq_s, seq_l, engine)

    x_sign = astar_sign * run_s[1:]
    log_x = astar_log + run_l[1:]
    with np.errstate(over="ignore"):
        x = x_sign * np.exp(log_x)

    flags = _output_flags(x)
    finite = np.isfinite(x)
    if finite.any():
        peak = np.abs(x[finite]).max()
        if peak > 0.0 and (np.abs(x[finite]) < CANCELLATION_RTOL * peak).any():
            flags.add(FLAG_CANCELLATION_HEAVY)

    trace_data = None
    if trace:
        bstar_s, bstar_l = _signed_lcse(term_sign, term_log, engine)
        trace_data = {
            "a_star_sign": astar_sign,
            "a_star_logmag": astar_log,
            "b_star_sign": bstar_s,
            "b_star_logmag": bstar_l,
        }
    return SolveResult(x, SolveMethod.LOGSPACE, frozenset(flags), trace_data)


def solve_pairscan(s: CoefficientSeries, engine: ScanEngine = DEFAULT_ENGINE) -> SolveResult:
    """Scan of the per-step affine maps under composition.

    Blocked like every other scan: each block folds its steps into one
    carry, the carries roll forward to give each block its entry value, and
    each block then runs seeded from that entry.  No domain restrictions;
    zeros simply forget the past.
    """
    n = s.n
    x = np.empty(n)
    if n == 0:
        return SolveResult(x, SolveMethod.PAIRSCAN, frozenset())
    bs = engine.block_size
    nblocks = _num_blocks(n, bs)
    entries = np.empty(nblocks)
    if nblocks == 1:
        entries[0] = s.x0
    else:
        # The last block's carry seeds nothing, so fold one block fewer.
        carry_a = np.empty(nblocks - 1)
        carry_b = np.empty(nblocks - 1)
        _run_spans(
            engine, 0, nblocks - 1,
            lambda lo, hi: _kernels.carry_fold_blocks(s.a, s.b, bs, lo, hi, carry_a, carry_b),
        )
        _kernels.entry_values(carry_a, carry_b, s.x0, entries)
    _run_spans(
        engine, 0, nblocks,
        lambda lo, hi: _kernels.recurrence_blocks(s.a, s.b, x, bs, lo, hi, entries),
    )
    return SolveResult(x, SolveMethod.PAIRSCAN, frozenset(_output_flags(x)))


_SOLVERS = {
    SolveMethod.SEQUENTIAL: lambda s, engine: solve_sequential(s),
    SolveMethod.DIRECT: solve_direct,
    SolveMethod.LOGSPACE: solve_logspace,
    SolveMethod.PAIRSCAN: solve_pairscan,
}


def solve(s: CoefficientSeries, method: SolveMethod | str = SolveMethod.PAIRSCAN,
          engine: ScanEngine = DEFAULT_ENGINE) -> SolveResult:
    """Solve with the named method; accepts SolveMethod or its string value."""
    return _SOLVERS[SolveMethod(method)](s, engine)


def solve_chunked(chunks: Iterable[CoefficientSeries], x0: float,
                  method: SolveMethod | str = SolveMethod.PAIRSCAN,
                  engine: ScanEngine = DEFAULT_ENGINE) -> SolveResult:
    """Solve a series delivered as ordered fragments, e.g. from a stream.

    Each fragment is solved with the running value carried over from the
    previous one, so the concatenated output matches the monolithic solve of
    the concatenated series up to block-boundary rounding.  Solver errors
    gain the offending fragment's index.  If a fragment saturates, the
    stream cannot continue and the next fragment raises.
    """
    method = SolveMethod(method)
    parts: list[np.ndarray] = []
    flags: set[str] = set()
    value = float(x0)
    for k, frag in enumerate(chunks):
        if not isinstance(frag, CoefficientSeries):
            raise TypeError(f"fragment {k} is not a CoefficientSeries")
        if frag.n == 0:
            raise ValueError(f"fragment {k} is empty")
        if not math.isfinite(value):
            raise UnsupportedInputError(
                f"fragment {k}: running value saturated to {value!r} in an earlier fragment",
                fragment=k,
            )
        try:
            res = solve(replace(frag, x0=value), method, engine)
        except UnsupportedInputError as err:
            raise UnsupportedInputError(f"fragment {k}: {err}", index=err.index, fragment=k) from err
        parts.append(res.x)
        flags |= res.flags
        value = float(res.x[-1])
    x = np.concatenate(parts) if parts else np.empty(0)
    return SolveResult(x, method, frozenset(flags))


def expand_element(s: CoefficientSeries, t: int) -> float:
    """Evaluate one element straight from the expanded closed form.

    x_t = (prod_{k<=t} a_k) * (x0 + sum_{k<=t} b_k / prod_{j<=k} a_j) with t
    1-based.  Plain Python floats, one term at a time: an independent oracle
    for the algebra, not an efficient (or stable) solver.
    """
    if not 1 <= t <= s.n:
        raise ValueError(f"t must be in [1, {s.n}], got {t}")
    _first_zero(s.a[:t], "expand_element")
    prod = 1.0
    total = float(s.x0)
    for k in range(t):
        prod *= float(s.a[k])
        total += float(s.b[k]) / prod
    return prod * total
