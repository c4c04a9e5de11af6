"""Sign / log-magnitude arithmetic for real numbers.

A real value x is carried as a pair (sign, logmag) with

    x = sign * exp(logmag),  sign in {-1, 0, +1}.

Products and sums of values spanning hundreds of orders of magnitude stay
representable because only the exponent is tracked.  Unlike a complex-valued
logarithm, the sign of a negative number is kept exactly instead of being
encoded as an imaginary part, so round-trips never leave the reals.

Zero is canonical: sign == 0 if and only if logmag == -inf.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

__all__ = ["SignedLog", "ZERO", "ONE", "from_real", "to_real", "sl_mul", "sl_add"]

# Largest finite double is exp(709.78...); beyond that to_real saturates.
_LOG_DBL_MAX = math.log(sys.float_info.max)


@dataclass(frozen=True)
class SignedLog:
    """A real number stored as (sign, natural log of magnitude)."""

    sign: int
    logmag: float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if math.isnan(self.logmag):
            raise ValueError("logmag must not be NaN")
        if self.sign == 0:
            if self.logmag != -math.inf:
                raise ValueError("zero must be canonical: (0, -inf)")
        elif self.logmag == math.inf:
            raise ValueError("logmag +inf is not a representable real")

    def __mul__(self, other: "SignedLog") -> "SignedLog":
        return sl_mul(self, other)

    def __add__(self, other: "SignedLog") -> "SignedLog":
        return sl_add(self, other)

    def __neg__(self) -> "SignedLog":
        return SignedLog(-self.sign, self.logmag)

    def is_zero(self) -> bool:
        return self.sign == 0


ZERO = SignedLog(0, -math.inf)
ONE = SignedLog(1, 0.0)


def from_real(x: float) -> SignedLog:
    """Encode a finite float.  Rejects NaN and infinities."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"from_real requires a finite value, got {x!r}")
    if x == 0.0:
        return ZERO
    if x > 0.0:
        return SignedLog(1, math.log(x))
    return SignedLog(-1, math.log(-x))


def to_real(v: SignedLog) -> float:
    """Decode to a float.

    Raises OverflowError (carrying the offending logmag) when the magnitude
    exceeds the largest finite double, rather than silently returning inf.
    """
    if v.sign == 0:
        return 0.0
    try:
        mag = math.exp(v.logmag)
    except OverflowError:
        raise OverflowError(
            f"magnitude exp({v.logmag}) exceeds the float64 range (log cutoff {_LOG_DBL_MAX})"
        ) from None
    return mag if v.sign > 0 else -mag


def sl_mul(u: SignedLog, v: SignedLog) -> SignedLog:
    """Product.  Signs multiply, log magnitudes add; any zero wins."""
    sign = u.sign * v.sign
    if sign == 0:
        return ZERO
    return SignedLog(sign, u.logmag + v.logmag)


def sl_add(u: SignedLog, v: SignedLog) -> SignedLog:
    """Sum, evaluated without leaving log space.

    The larger magnitude M is factored out and the remainder handled with
    log1p(+-exp(m - M)), so the result is accurate even when the addends
    differ by hundreds of orders of magnitude.  Exact cancellation of equal
    and opposite values returns the canonical zero.
    """
    if u.sign == 0:
        return v
    if v.sign == 0:
        return u
    if u.logmag >= v.logmag:
        big, small = u, v
    else:
        big, small = v, u
    d = small.logmag - big.logmag  # <= 0
    if u.sign == v.sign:
        return SignedLog(big.sign, big.logmag + math.log1p(math.exp(d)))
    # Opposite signs: |result| = |big| - |small|.
    if d == 0.0:
        return ZERO
    e = math.exp(d)
    if e == 1.0:
        # exp rounded d = -tiny up to 1; the difference is below resolution.
        return ZERO
    return SignedLog(big.sign, big.logmag + math.log1p(-e))
