"""Independent reference implementations used as test oracles.

These deliberately avoid the library code paths they check: the Jacobi
oracle is the explicit terminating hypergeometric sum and the Kummer oracle
the explicit finite series, both evaluated in exact rational arithmetic
(float inputs are binary rationals, so the sums are exact) and rounded only
at the very end.
"""

import math
from fractions import Fraction


def _rising(x: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for i in range(n):
        out *= x + i
    return out


def jacobi_series(n: int, a, b, z) -> float:
    """P_n^(a,b)(z) = ((a+1)_n / n!) 2F1(-n, n+a+b+1; a+1; (1-z)/2), exact sum."""
    a, b, z = Fraction(a), Fraction(b), Fraction(z)
    pref = _rising(a + 1, n) / math.factorial(n)
    half = (1 - z) / 2
    total = Fraction(0)
    for k in range(n + 1):
        total += (
            _rising(Fraction(-n), k)
            * _rising(n + a + b + 1, k)
            / (_rising(a + 1, k) * math.factorial(k))
            * half**k
        )
    return float(pref * total)


def kummer_rational(k: int, b: Fraction, z: Fraction) -> Fraction:
    """F(-k, b; z) summed exactly over rationals."""
    total = Fraction(0)
    term = Fraction(1)
    for i in range(k + 1):
        total += term
        term = term * (i - k) * z / ((b + i) * (i + 1))
    return total
