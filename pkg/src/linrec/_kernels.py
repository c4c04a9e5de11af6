"""Compiled inner loops shared by the scan engine and the solvers.

Every *_range kernel works on the contiguous block span [blk_lo, blk_hi) of
an array partitioned into blocks of block_size elements.  Blocks are
independent in pass 1 and pass 3 of the two-pass scan, so threads can take
disjoint spans; results never depend on how spans are assigned because each
block's arithmetic is a fixed left-to-right fold.

All kernels release the GIL and cache their compiled form on disk.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

_NEG_INF = float("-inf")


# ---------------------------------------------------------------------------
# scalar cores


@njit(cache=True, nogil=True)
def _lse2(p, q):
    """log(exp(p) + exp(q)) with -inf as the additive identity."""
    if p == _NEG_INF:
        return q
    if q == _NEG_INF:
        return p
    if p >= q:
        return p + math.log1p(math.exp(q - p))
    return q + math.log1p(math.exp(p - q))


@njit(cache=True, nogil=True)
def _sladd2(s1, l1, s2, l2):
    """Signed log-space sum; signs are -1.0 / 0.0 / +1.0 floats."""
    if s1 == 0.0:
        return s2, l2
    if s2 == 0.0:
        return s1, l1
    if l1 >= l2:
        bs, bl, d = s1, l1, l2 - l1
    else:
        bs, bl, d = s2, l2, l1 - l2
    if s1 == s2:
        return bs, bl + math.log1p(math.exp(d))
    if d == 0.0:
        return 0.0, _NEG_INF
    e = math.exp(d)
    if e == 1.0:
        # Rounded up to 1 from below: difference is beyond log resolution.
        return 0.0, _NEG_INF
    return bs, bl + math.log1p(-e)


# ---------------------------------------------------------------------------
# pass 1: per-block unseeded inclusive scans


@njit(cache=True, nogil=True)
def cumsum_blocks(xs, out, block_size, blk_lo, blk_hi):
    n = xs.shape[0]
    for blk in range(blk_lo, blk_hi):
        start = blk * block_size
        end = min(start + block_size, n)
        acc = 0.0
        for i in range(start, end):
            acc = acc + xs[i]
            out[i] = acc


@njit(cache=True, nogil=True)
def cumprod_blocks(xs, out, block_size, blk_lo, blk_hi):
    n = xs.shape[0]
    for blk in range(blk_lo, blk_hi):
        start = blk * block_size
        end = min(start + block_size, n)
        acc = 1.0
        for i in range(start, end):
            acc = acc * xs[i]
            out[i] = acc


@njit(cache=True, nogil=True)
def lse_blocks(xs, out, block_size, blk_lo, blk_hi):
    n = xs.shape[0]
    for blk in range(blk_lo, blk_hi):
        start = blk * block_size
        end = min(start + block_size, n)
        acc = _NEG_INF
        for i in range(start, end):
            acc = _lse2(acc, xs[i])
            out[i] = acc


@njit(cache=True, nogil=True)
def slcse_blocks(sgn, lgm, out_s, out_l, block_size, blk_lo, blk_hi):
    n = sgn.shape[0]
    for blk in range(blk_lo, blk_hi):
        start = blk * block_size
        end = min(start + block_size, n)
        acc_s = 0.0
        acc_l = _NEG_INF
        for i in range(start, end):
            acc_s, acc_l = _sladd2(acc_s, acc_l, sgn[i], lgm[i])
            out_s[i] = acc_s
            out_l[i] = acc_l


# ---------------------------------------------------------------------------
# pass 3: combine the running carry into every later block
#
# carries[k] holds the scan of block totals up to and including block k, so
# block blk (blk >= 1) folds carries[blk - 1] in from the left.


@njit(cache=True, nogil=True)
def cumsum_apply(out, carries, block_size, blk_lo, blk_hi):
    n = out.shape[0]
    for blk in range(blk_lo, blk_hi):
        start = blk * block_size
        end = min(start + block_size, n)
        c = carries[blk - 1]
        for i in range(start, end):
            out[i] = c + out[i]


@njit(cache=True, nogil=True)
def cumprod_apply(out, carries, block_size, blk_lo, blk_hi):
    n = out.shape[0]
    for blk in range(blk_lo, blk_hi):
        start = blk * block_size
        end = min(start + block_size, n)
        c = carries[blk - 1]
        for i in range(start, end):
            out[i] = c * out[i]


@njit(cache=True, nogil=True)
def lse_apply(out, carries, block_size, blk_lo, blk_hi):
    n = out.shape[0]
    for blk in range(blk_lo, blk_hi):
        start = blk * block_size
        end = min(start + block_size, n)
        c = carries[blk - 1]
        for i in range(start, end):
            out[i] = _lse2(c, out[i])


@njit(cache=True, nogil=True)
def slcse_apply(out_s, out_l, carry_s, carry_l, block_size, blk_lo, blk_hi):
    n = out_s.shape[0]
    for blk in range(blk_lo, blk_hi):
        start = blk * block_size
        end = min(start + block_size, n)
        cs = carry_s[blk - 1]
        cl = carry_l[blk - 1]
        for i in range(start, end):
            out_s[i], out_l[i] = _sladd2(cs, cl, out_s[i], out_l[i])


# ---------------------------------------------------------------------------
# recurrence-specific kernels


@njit(cache=True, nogil=True)
def carry_fold_blocks(a, b, block_size, blk_lo, blk_hi, carry_a, carry_b):
    """Fold each block's steps into one affine map x -> A*x + B."""
    n = a.shape[0]
    for blk in range(blk_lo, blk_hi):
        start = blk * block_size
        end = min(start + block_size, n)
        acc_a = 1.0
        acc_b = 0.0
        for i in range(start, end):
            acc_a = a[i] * acc_a
            acc_b = a[i] * acc_b + b[i]
        carry_a[blk] = acc_a
        carry_b[blk] = acc_b


@njit(cache=True, nogil=True)
def entry_values(carry_a, carry_b, x0, entries):
    """Roll block carries forward: the value entering block k."""
    entries[0] = x0
    for k in range(1, entries.shape[0]):
        entries[k] = carry_a[k - 1] * entries[k - 1] + carry_b[k - 1]


@njit(cache=True, nogil=True)
def recurrence_blocks(a, b, out, block_size, blk_lo, blk_hi, entries):
    """Run x[i] = a[i]*x[i-1] + b[i] inside each block from its entry value."""
    n = a.shape[0]
    for blk in range(blk_lo, blk_hi):
        start = blk * block_size
        end = min(start + block_size, n)
        acc = entries[blk]
        for i in range(start, end):
            acc = a[i] * acc + b[i]
            out[i] = acc


def warm_up() -> None:
    """Force-compile every kernel on a 2-element toy problem."""
    xs = np.array([0.5, 2.0])
    out = np.empty(2)
    carries = np.array([1.0])
    cumsum_blocks(xs, out, 1, 0, 2)
    cumsum_apply(out, carries, 1, 1, 2)
    cumprod_blocks(xs, out, 1, 0, 2)
    cumprod_apply(out, carries, 1, 1, 2)
    lse_blocks(xs, out, 1, 0, 2)
    lse_apply(out, carries, 1, 1, 2)
    sgn = np.array([1.0, -1.0])
    out_s = np.empty(2)
    slcse_blocks(sgn, xs, out_s, out, 1, 0, 2)
    slcse_apply(out_s, out, carries, carries, 1, 1, 2)
    ca = np.empty(2)
    cb = np.empty(2)
    carry_fold_blocks(xs, xs, 1, 0, 2, ca, cb)
    entry_values(ca, cb, 1.0, out)
    recurrence_blocks(xs, xs, out, 1, 0, 2, np.array([1.0, 2.0]))
