"""Arithmetic on (sign, log magnitude) pairs, including negative numbers.

Ordinary log-domain tricks stop at zero: log of a negative number is not a
real.  Carrying the sign separately keeps multiplication trivial (signs
multiply, log magnitudes add) and makes addition a log-sum-exp with a sign
case split.  The payoff is exact closure over values like -exp(2000) that
no float64 can hold.
"""

import math

from linrec import ZERO, SignedLog, from_real, sl_add, sl_mul, to_real


def show(label, v):
    try:
        as_float = f"{to_real(v):.6g}"
    except OverflowError:
        as_float = "too large for float64"
    print(f"{label:>28}: sign={v.sign:+d} logmag={v.logmag:+.6g}  ({as_float})")


def main():
    x = from_real(-3.0)
    y = from_real(2.0)
    show("x = -3", x)
    show("y = 2", y)
    show("x * y", sl_mul(x, y))
    show("x + y", sl_add(x, y))
    show("x + 3", sl_add(x, from_real(3.0)))  # exact cancellation hits zero
    print()

    huge = SignedLog(-1, 2000.0)  # -exp(2000), far beyond float64
    show("h = -exp(2000)", huge)
    show("h * h", sl_mul(huge, huge))
    show("h + exp(1999)", sl_add(huge, SignedLog(+1, 1999.0)))
    print()

    print("operators work too:")
    print(f"  from_real(-3) * from_real(2) = {(x * y).sign:+d}, {(x * y).logmag:.6f}")
    print(f"  ZERO is the additive identity: {sl_add(ZERO, x) == x}")
    print()

    print("to_real refuses what float64 cannot represent:")
    try:
        to_real(huge)
    except OverflowError as err:
        print(f"  OverflowError: {err}")
    print(f"  (float64 gives out just past logmag {math.log(1.7976931348623157e308):.3f})")


if __name__ == "__main__":
    main()
