"""Quantum-number bookkeeping for the generalized MICZ-Kepler problem.

The monopole charge s restricts m, j and n to share its integer /
half-odd-integer character, so all of those labels are kept as exact
twice-value integers and only the coupling shifts delta1, delta2 (and
everything built from them) live in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator


class InvalidQuantumNumbers(ValueError):
    """Raised when (s, c1, c2, m, j) violate the quantization constraints."""


class InvalidLevel(ValueError):
    """Raised when a principal quantum number n does not belong to the sector."""


@dataclass(frozen=True)
class HalfInt:
    """Exact integer or half-integer, stored as twice its value."""

    twice_value: int

    @classmethod
    def from_int(cls, k: int) -> "HalfInt":
        return cls(2 * k)

    @classmethod
    def parse(cls, text: str) -> "HalfInt":
        """Parse '3/2', '-1/2', '1.5' or '2' into an exact half-integer."""
        try:
            q = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidQuantumNumbers(f"cannot parse half-integer from {text!r}") from exc
        if q.denominator not in (1, 2):
            raise InvalidQuantumNumbers(f"{text!r} is not an exact integer or half-integer")
        return cls(q.numerator * (2 // q.denominator))

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    @property
    def parity(self) -> int:
        """0 for integers, 1 for half-odd integers."""
        return self.twice_value & 1

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    def __float__(self) -> float:
        return self.twice_value / 2.0

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"

    @staticmethod
    def _coerce(other) -> "HalfInt":
        if isinstance(other, HalfInt):
            return other
        if isinstance(other, int):
            return HalfInt(2 * other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.twice_value == o.twice_value

    def __hash__(self) -> int:
        return hash(self.as_fraction())

    def __lt__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self.twice_value < o.twice_value

    def __le__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self.twice_value <= o.twice_value

    def __gt__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self.twice_value > o.twice_value

    def __ge__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self.twice_value >= o.twice_value

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else HalfInt(self.twice_value + o.twice_value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else HalfInt(self.twice_value - o.twice_value)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else HalfInt(o.twice_value - self.twice_value)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice_value)

    def __abs__(self) -> "HalfInt":
        return HalfInt(abs(self.twice_value))


@dataclass(frozen=True)
class MonopoleParams:
    """External couplings: monopole charge s and the axial strengths c1, c2 >= 0."""

    s: HalfInt
    c1: float
    c2: float

    def __post_init__(self):
        if self.c1 < 0 or self.c2 < 0:
            raise InvalidQuantumNumbers(
                f"couplings must be non-negative, got c1={self.c1}, c2={self.c2}"
            )


@dataclass(frozen=True)
class SectorLabels:
    """Derived quantities of one (m, j) angular sector."""

    params: MonopoleParams
    m: HalfInt
    j: HalfInt
    m1: float
    m2: float
    mplus: HalfInt
    delta1: float
    delta2: float
    bigJ: float
    sep_const: float


@dataclass(frozen=True)
class LevelLabels:
    """Bound-state level: principal number n, scale K, epsilon = 1/K and energy."""

    n: HalfInt
    K: float
    epsilon: float
    energy: float


@dataclass(frozen=True)
class IrrepLabels:
    """Lowest-weight representation labels (mu, nu) for excitation number nprime."""

    mu: float
    nu: float
    nprime: int


def m_plus(s: HalfInt, m: HalfInt) -> HalfInt:
    """(|m+s| + |m-s|)/2, exact.  Always >= |m| and shares the parity of m."""
    tv = abs(m.twice_value + s.twice_value) + abs(m.twice_value - s.twice_value)
    # tv is a sum of two same-parity integers, hence even
    return HalfInt(tv // 2)


def make_sector(params: MonopoleParams, m: HalfInt, j: HalfInt) -> SectorLabels:
    """Validate (m, j) against the monopole charge and derive the sector labels.

    m1 = sqrt((m-s)^2 + 4 c1), m2 = sqrt((m+s)^2 + 4 c2), delta_i the excess of
    m_i over the unshifted |m -+ s|, J = j + (delta1+delta2)/2 and the angular
    separation constant J(J+1).
    """
    s = params.s
    if m.parity != s.parity:
        raise InvalidQuantumNumbers(
            f"m={m} must be integer/half-integer exactly as s={s} is"
        )
    if j.parity != s.parity:
        raise InvalidQuantumNumbers(
            f"j={j} must be integer/half-integer exactly as s={s} is"
        )
    if abs(m) > j:
        raise InvalidQuantumNumbers(f"m={m} violates -j <= m <= j for j={j}")
    mp = m_plus(s, m)
    if j < mp:
        raise InvalidQuantumNumbers(
            f"j={j} is invalid: the sector requires j >= m_plus = {mp}"
        )
    if (j.twice_value - mp.twice_value) % 2 != 0:
        raise InvalidQuantumNumbers(f"j - m_plus must be a non-negative integer, got j={j}, m_plus={mp}")

    dm = float(m - s)
    dp = float(m + s)
    m1 = math.sqrt(dm * dm + 4.0 * params.c1)
    m2 = math.sqrt(dp * dp + 4.0 * params.c2)
    delta1 = m1 - abs(dm)
    delta2 = m2 - abs(dp)
    bigJ = float(j) + 0.5 * (delta1 + delta2)
    return SectorLabels(
        params=params,
        m=m,
        j=j,
        m1=m1,
        m2=m2,
        mplus=mp,
        delta1=delta1,
        delta2=delta2,
        bigJ=bigJ,
        sep_const=bigJ * (bigJ + 1.0),
    )


def energy(sector: SectorLabels, n: HalfInt) -> LevelLabels:
    """Level labels for principal number n = j + 1, j + 2, ... of the sector.

    K = J + (n - j) keeps the unit spacing K_{n+1} = K_n + 1 exact in floating
    point; the energy is -1/(2 K^2).
    """
    if not isinstance(n, HalfInt):
        n = HalfInt.from_int(n)
    j = sector.j
    if n.parity != j.parity:
        raise InvalidLevel(f"n={n} must share the integer/half-integer parity of j={j}")
    if n.twice_value - j.twice_value < 2:
        raise InvalidLevel(f"n={n} is below the tower bottom n = j + 1 = {j + 1}")
    K = sector.bigJ + float(n - j)
    return LevelLabels(n=n, K=K, epsilon=1.0 / K, energy=-1.0 / (2.0 * K * K))


def irrep_labels(sector: SectorLabels, nprime: int) -> IrrepLabels:
    """Representation labels mu = J, nu = J + nprime + 1 of the n-th tower state."""
    if nprime < 0:
        raise InvalidLevel(f"nprime must be a non-negative integer, got {nprime}")
    return IrrepLabels(mu=sector.bigJ, nu=sector.bigJ + nprime + 1.0, nprime=nprime)


def iter_valid_j(params: MonopoleParams, m: HalfInt, count: int = 33) -> Iterator[HalfInt]:
    """The j values admitting the sector (m, j): m_plus, m_plus + 1, ..."""
    start = m_plus(params.s, m)
    for i in range(count):
        yield start + i


def levels(sector: SectorLabels, count: int = 32) -> list[LevelLabels]:
    """The lowest `count` bound levels n = j+1, ..., j+count of the sector."""
    return [energy(sector, sector.j + (i + 1)) for i in range(count)]
