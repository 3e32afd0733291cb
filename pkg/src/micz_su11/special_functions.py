"""Jacobi polynomials with real parameters and the terminating Kummer function.

These are the only special functions the closed-form eigenfunctions need:
the bound-state first argument of F(a, b; z) is always a non-positive
integer, so no non-terminating hypergeometric machinery is provided.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_DEGREE_CAP = 200


class ParamOutOfRange(ValueError):
    """Parameter outside the orthogonality/convergence range."""


class DegreeCapExceeded(ValueError):
    """Requested polynomial degree above the configured cap."""


@dataclass(frozen=True)
class JacobiParams:
    degree: int
    a: float
    b: float

    def __post_init__(self):
        if self.degree < 0:
            raise ParamOutOfRange(f"degree must be non-negative, got {self.degree}")
        if self.a <= -1.0 or self.b <= -1.0:
            raise ParamOutOfRange(f"Jacobi parameters need a, b > -1, got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class KummerParams:
    k: int
    bparam: float

    def __post_init__(self):
        if self.k < 0:
            raise ParamOutOfRange(f"terminating order k must be non-negative, got {self.k}")
        if self.bparam <= 0.0:
            raise ParamOutOfRange(f"Kummer parameter b must be positive, got {self.bparam}")


def jacobi(p: JacobiParams, z, degree_cap: int = DEFAULT_DEGREE_CAP):
    """P^(a,b)_degree(z) by the three-term recurrence in the degree.

    Accepts a scalar or an ndarray for z.  With a, b > -1 none of the
    recurrence denominators can vanish.
    """
    if p.degree > degree_cap:
        raise DegreeCapExceeded(f"degree {p.degree} exceeds cap {degree_cap}")
    a, b = p.a, p.b
    one = np.ones_like(z, dtype=float) if isinstance(z, np.ndarray) else 1.0
    if p.degree == 0:
        return one
    prev = one
    cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * z
    for n in range(2, p.degree + 1):
        apb = a + b
        c1 = 2.0 * n * (n + apb) * (2.0 * n + apb - 2.0)
        c2 = (2.0 * n + apb - 1.0) * (a * a - b * b)
        c3 = (2.0 * n + apb - 1.0) * (2.0 * n + apb) * (2.0 * n + apb - 2.0)
        c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + apb)
        prev, cur = cur, ((c2 + c3 * z) * cur - c4 * prev) / c1
    return cur


def jacobi_deriv(p: JacobiParams, z, degree_cap: int = DEFAULT_DEGREE_CAP):
    """d/dz P^(a,b)_k(z) = ((k+a+b+1)/2) P^(a+1,b+1)_(k-1)(z) for k >= 1, else 0."""
    if p.degree > degree_cap:
        raise DegreeCapExceeded(f"degree {p.degree} exceeds cap {degree_cap}")
    if p.degree == 0:
        return np.zeros_like(z, dtype=float) if isinstance(z, np.ndarray) else 0.0
    shifted = JacobiParams(p.degree - 1, p.a + 1.0, p.b + 1.0)
    return 0.5 * (p.degree + p.a + p.b + 1.0) * jacobi(shifted, z, degree_cap)


def kummer_terminating(p: KummerParams, z):
    """F(-k, b; z) as the exact (k+1)-term sum, Kahan-compensated.

    Terms alternate in sign for z > 0, so the compensation bounds the
    cancellation error of the partial sums.
    """
    one = np.ones_like(z, dtype=float) if isinstance(z, np.ndarray) else 1.0
    total = one * 1.0
    comp = one * 0.0
    term = one * 1.0
    for i in range(p.k):
        term = term * z * ((i - p.k) / ((p.bparam + i) * (i + 1.0)))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total
