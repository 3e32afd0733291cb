"""Exact kernel for one-variable differential operators with Laurent coefficients.

Operators are kept in normal-ordered canonical form: sums of
coeff(J, K) * x^p * D^q with every D moved to the right through the rewrite
D x^k = x^k D + k x^(k-1) (valid for any integer k, negative included).
Coefficients are polynomials in the two indeterminates J and K over exact
rationals; floats only appear after an explicit `substitute`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

Scalar = int | Fraction


class NoFactorization(ValueError):
    """The first-order ansatz cannot reproduce the requested operator."""


def _falling(k: int, m: int) -> int:
    """k (k-1) ... (k-m+1), exact for any integer k."""
    out = 1
    for i in range(m):
        out *= k - i
    return out


class ParamPoly:
    """Polynomial in J and K with Fraction coefficients, keyed by (jpow, kpow)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        if terms:
            for (jp, kp), c in terms.items():
                c = Fraction(c)
                if c:
                    clean[(jp, kp)] = clean.get((jp, kp), Fraction(0)) + c
                    if not clean[(jp, kp)]:
                        del clean[(jp, kp)]
        self._terms = clean

    @classmethod
    def const(cls, c: Scalar) -> "ParamPoly":
        return cls({(0, 0): Fraction(c)})

    @classmethod
    def zero(cls) -> "ParamPoly":
        return cls()

    @classmethod
    def one(cls) -> "ParamPoly":
        return cls.const(1)

    @classmethod
    def J(cls) -> "ParamPoly":
        return cls({(1, 0): 1})

    @classmethod
    def K(cls) -> "ParamPoly":
        return cls({(0, 1): 1})

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return all(key == (0, 0) for key in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"{self.render()} is not a constant")
        return self._terms.get((0, 0), Fraction(0))

    def items(self):
        return self._terms.items()

    def kpow_split(self) -> dict[int, "ParamPoly"]:
        """Group terms by their power of K (coefficients are polynomials in J)."""
        out: dict[int, dict[tuple[int, int], Fraction]] = {}
        for (jp, kp), c in self._terms.items():
            out.setdefault(kp, {})[(jp, 0)] = c
        return {kp: ParamPoly(t) for kp, t in out.items()}

    @staticmethod
    def _coerce(other) -> "ParamPoly":
        if isinstance(other, ParamPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for key, c in o._terms.items():
            terms[key] = terms.get(key, Fraction(0)) + c
        return ParamPoly(terms)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else o + (-self)

    def __neg__(self):
        return ParamPoly({key: -c for key, c in self._terms.items()})

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        terms: dict[tuple[int, int], Fraction] = {}
        for (ja, ka), ca in self._terms.items():
            for (jb, kb), cb in o._terms.items():
                key = (ja + jb, ka + kb)
                terms[key] = terms.get(key, Fraction(0)) + ca * cb
        return ParamPoly(terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def evaluate(self, jval: float, kval: float) -> float:
        return float(sum(float(c) * jval**jp * kval**kp for (jp, kp), c in self._terms.items()))

    def render(self) -> str:
        if not self._terms:
            return "0"
        keys = sorted(self._terms, key=lambda t: (-(t[0] + t[1]), -t[1], -t[0]))
        parts: list[str] = []
        for key in keys:
            c = self._terms[key]
            mono = ""
            jp, kp = key
            if jp:
                mono += "J" if jp == 1 else f"J^{jp}"
            if kp:
                mono += "K" if kp == 1 else f"K^{kp}"
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                coeff = str(mag) if mag.denominator == 1 else f"({mag})"
                body = coeff + mono
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"ParamPoly({self.render()})"


def _poly_jj1() -> ParamPoly:
    """J(J+1)."""
    J = ParamPoly.J()
    return J * (J + 1)


class NormalOrderedOperator:
    """Canonical normal-ordered operator: (xpow, dorder) -> ParamPoly coefficient."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], ParamPoly | Scalar] | None = None):
        clean: dict[tuple[int, int], ParamPoly] = {}
        if terms:
            for (xp, dq), c in terms.items():
                if dq < 0:
                    raise ValueError("derivative order must be non-negative")
                poly = c if isinstance(c, ParamPoly) else ParamPoly.const(c)
                if not poly.is_zero:
                    acc = clean.get((xp, dq))
                    poly = poly if acc is None else acc + poly
                    if poly.is_zero:
                        clean.pop((xp, dq), None)
                    else:
                        clean[(xp, dq)] = poly
        self._terms = clean

    @classmethod
    def zero(cls) -> "NormalOrderedOperator":
        return cls()

    @classmethod
    def identity(cls) -> "NormalOrderedOperator":
        return cls({(0, 0): 1})

    @classmethod
    def x_power(cls, k: int, coeff: ParamPoly | Scalar = 1) -> "NormalOrderedOperator":
        return cls({(k, 0): coeff})

    @classmethod
    def derivative(cls, order: int = 1, coeff: ParamPoly | Scalar = 1) -> "NormalOrderedOperator":
        return cls({(0, order): coeff})

    @classmethod
    def term(cls, xpow: int, dorder: int, coeff: ParamPoly | Scalar = 1) -> "NormalOrderedOperator":
        return cls({(xpow, dorder): coeff})

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, xpow: int, dorder: int) -> ParamPoly:
        return self._terms.get((xpow, dorder), ParamPoly.zero())

    def items(self):
        return self._terms.items()

    def canonical_terms(self) -> list[tuple[tuple[int, int], ParamPoly]]:
        """Terms ordered derivative-major, then by ascending x power."""
        return sorted(self._terms.items(), key=lambda kv: (-kv[0][1], kv[0][0]))

    def __add__(self, other):
        if not isinstance(other, NormalOrderedOperator):
            return NotImplemented
        terms: dict[tuple[int, int], ParamPoly] = dict(self._terms)
        for key, c in other._terms.items():
            terms[key] = terms.get(key, ParamPoly.zero()) + c
        return NormalOrderedOperator(terms)

    def __sub__(self, other):
        if not isinstance(other, NormalOrderedOperator):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return NormalOrderedOperator({key: -c for key, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            return NormalOrderedOperator({key: c * other for key, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, NormalOrderedOperator):
            return NotImplemented
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, NormalOrderedOperator):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset((key, c) for key, c in self._terms.items()))

    def max_dorder(self) -> int:
        return max((dq for (_, dq) in self._terms), default=0)

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (xp, dq), poly in self.canonical_terms():
            pieces = []
            if poly != 1 or (xp, dq) == (0, 0):
                pieces.append(f"({poly.render()})")
            if xp:
                pieces.append("x" if xp == 1 else f"x^{xp}")
            if dq:
                pieces.append("D" if dq == 1 else f"D^{dq}")
            parts.append(" ".join(pieces))
        return " + ".join(parts)

    def __repr__(self):
        return f"NormalOrderedOperator({self.render()})"


def compose(lhs: NormalOrderedOperator, rhs: NormalOrderedOperator) -> NormalOrderedOperator:
    """Normal-ordered product: D^q x^r = sum_i C(q,i) r^(i-falling) x^(r-i) D^(q-i)."""
    terms: dict[tuple[int, int], ParamPoly] = {}
    for (p, q), cl in lhs.items():
        for (r, s), cr in rhs.items():
            cc = cl * cr
            for i in range(q + 1):
                w = math.comb(q, i) * _falling(r, i)
                if w == 0:
                    continue
                key = (p + r - i, q - i + s)
                add = cc * w
                acc = terms.get(key)
                acc = add if acc is None else acc + add
                if acc.is_zero:
                    terms.pop(key, None)
                else:
                    terms[key] = acc
    return NormalOrderedOperator(terms)


def commutator(lhs: NormalOrderedOperator, rhs: NormalOrderedOperator) -> NormalOrderedOperator:
    return compose(lhs, rhs) - compose(rhs, lhs)


def monomial_action(op: NormalOrderedOperator, k: int) -> list[tuple[int, ParamPoly]]:
    """Image of x^k: x^p D^q x^k = k^(q-falling) x^(k+p-q).  The equality oracle."""
    acc: dict[int, ParamPoly] = {}
    for (p, q), c in op.items():
        w = _falling(k, q)
        if w == 0:
            continue
        power = k + p - q
        cur = acc.get(power)
        add = c * w
        cur = add if cur is None else cur + add
        if cur.is_zero:
            acc.pop(power, None)
        else:
            acc[power] = cur
    return sorted(acc.items())


# ---------------------------------------------------------------------------
# The concrete operators of the radial problem (scaled variable x = r/K_n)
# ---------------------------------------------------------------------------

def build_Ln() -> NormalOrderedOperator:
    """-x^2 D^2 - 2K x + x^2 with K symbolic; eigenvalue on bound states is -J(J+1)."""
    return NormalOrderedOperator(
        {(2, 2): -1, (1, 0): ParamPoly.K() * (-2), (2, 0): 1}
    )


def build_T3() -> NormalOrderedOperator:
    """(1/2)(-x D^2 + x + J(J+1)/x)."""
    half = Fraction(1, 2)
    return NormalOrderedOperator(
        {(1, 2): -half, (1, 0): half, (-1, 0): _poly_jj1() * half}
    )


def build_Tpm_n(sign: int) -> NormalOrderedOperator:
    """First-order ladder factor -+x D + x - K; sign=+1 gives the raising one."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return NormalOrderedOperator(
        {(1, 1): -sign, (1, 0): 1, (0, 0): -ParamPoly.K()}
    )


def build_Tpm(sign: int) -> NormalOrderedOperator:
    """Second-order su(1,1) ladder generator -+x D + x - T3."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    linear = NormalOrderedOperator({(1, 1): -sign, (1, 0): 1})
    return linear - build_T3()


def casimir(mirror: bool = False) -> NormalOrderedOperator:
    """Quadratic Casimir -T+T- + T3^2 - T3 (or the mirror -T-T+ + T3^2 + T3).

    Both canonicalize to the constant J(J+1) times the identity.
    """
    t3 = build_T3()
    tp = build_Tpm(+1)
    tm = build_Tpm(-1)
    if mirror:
        return -compose(tm, tp) + compose(t3, t3) + t3
    return -compose(tp, tm) + compose(t3, t3) - t3


def replace_K(op: NormalOrderedOperator, replacement: NormalOrderedOperator) -> NormalOrderedOperator:
    """Substitute the scalar K by an operator (coefficients must be K-linear).

    The K-linear part acts with the replacement composed on the right, which
    reproduces the definitional identity T_pm = -+xD + x - T3 from the
    first-order factors.
    """
    out = NormalOrderedOperator.zero()
    for (xp, dq), poly in op.items():
        split = poly.kpow_split()
        if any(kp > 1 for kp in split):
            raise ValueError("operator coefficients must be at most linear in K")
        c0 = split.get(0)
        c1 = split.get(1)
        if c0 is not None:
            out = out + NormalOrderedOperator({(xp, dq): c0})
        if c1 is not None:
            out = out + compose(NormalOrderedOperator({(xp, dq): c1}), replacement)
    return out


# ---------------------------------------------------------------------------
# Numeric bridge
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NumericOperator:
    """Operator with coefficients evaluated at fixed (J, K): (xpow, dorder, coeff)."""

    terms: tuple[tuple[int, int, float], ...]
    jval: float
    kval: float

    def max_dorder(self) -> int:
        return max((dq for (_, dq, _) in self.terms), default=0)


def substitute(op: NormalOrderedOperator, jval: float, kval: float) -> NumericOperator:
    """Evaluate the ParamPoly coefficients; zero terms are dropped."""
    terms = []
    for (xp, dq), poly in op.canonical_terms():
        c = poly.evaluate(jval, kval)
        if c != 0.0:
            terms.append((xp, dq, c))
    return NumericOperator(terms=tuple(terms), jval=jval, kval=kval)


# ---------------------------------------------------------------------------
# Schroedinger factorization ansatz
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FactorizationSolution:
    """One branch of (xD + a x + b)(-xD + c x + f) = target + (g - eigenvalue)."""

    branch: int
    a: ParamPoly
    b: ParamPoly
    c: ParamPoly
    f: ParamPoly
    g: ParamPoly
    eigenvalue: ParamPoly

    def left_factor(self) -> NormalOrderedOperator:
        return NormalOrderedOperator({(1, 1): 1, (1, 0): self.a, (0, 0): self.b})

    def right_factor(self) -> NormalOrderedOperator:
        return NormalOrderedOperator({(1, 1): -1, (1, 0): self.c, (0, 0): self.f})

    def product(self) -> NormalOrderedOperator:
        return compose(self.left_factor(), self.right_factor())

    def offset(self) -> ParamPoly:
        """Constant by which the product exceeds the target: g - eigenvalue."""
        return self.g - self.eigenvalue


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def solve_schrodinger_ansatz(
    target: NormalOrderedOperator,
    eigenvalue: ParamPoly | None = None,
) -> list[FactorizationSolution]:
    """All first-order factorizations of a -x^2 D^2 + (lin in x) + (quad in x) operator.

    `eigenvalue` is the constant the target produces on the eigenfunctions the
    ansatz equation is written for (default -J(J+1)); it is absorbed into g so
    the returned g matches the eigenspace statement of the factorization.
    """
    if eigenvalue is None:
        eigenvalue = -_poly_jj1()
    allowed = {(2, 2), (2, 1), (1, 1), (2, 0), (1, 0), (0, 0)}
    extra = [key for key, _ in target.items() if key not in allowed]
    if extra:
        raise NoFactorization(f"target has terms outside the ansatz family at {sorted(extra)}")
    if target.coeff(2, 2) != -1:
        raise NoFactorization("target must have leading term -x^2 D^2")
    if not target.coeff(2, 1).is_zero or not target.coeff(1, 1).is_zero:
        raise NoFactorization("targets with x^2 D or x D terms are outside the ansatz family")
    gamma = target.coeff(2, 0)
    if not gamma.is_constant:
        raise NoFactorization(f"x^2 coefficient must be a constant, got {gamma.render()}")
    g0 = gamma.constant_value()
    if g0 == 0:
        raise NoFactorization(
            "degenerate target: the x^2 coefficient vanishes, so a = c = 0 and "
            "b, f are unconstrained; no discrete solution branches exist"
        )
    root = _rational_sqrt(g0)
    if root is None:
        raise NoFactorization(f"x^2 coefficient {g0} is not a rational square")
    beta = target.coeff(1, 0)
    t00 = target.coeff(0, 0)

    solutions = []
    for branch in (+1, -1):
        a = ParamPoly.const(branch * root)
        inv2a = Fraction(1, 2) * Fraction(1, branch * root)
        f = beta * inv2a
        b = f - 1
        c = a
        offset = b * f - t00
        g = eigenvalue + offset
        sol = FactorizationSolution(branch=branch, a=a, b=b, c=c, f=f, g=g, eigenvalue=eigenvalue)
        if sol.product() != target + (offset * NormalOrderedOperator.identity()):
            raise NoFactorization(
                f"branch {branch:+d} failed re-expansion; target is not factorizable"
            )
        solutions.append(sol)
    return solutions


# ---------------------------------------------------------------------------
# Named identity suite (exact zero checks)
# ---------------------------------------------------------------------------

def identity_suite(t3: NormalOrderedOperator | None = None) -> list[tuple[str, NormalOrderedOperator]]:
    """The six defining identities as (name, difference) pairs; all must be zero.

    Passing a custom t3 rebuilds every derived operator from it, which lets a
    corrupted generator demonstrate the failure path.
    """
    if t3 is None:
        t3 = build_T3()
    xd = NormalOrderedOperator({(1, 1): 1})
    x1 = NormalOrderedOperator.x_power(1)
    tp = -xd + x1 - t3
    tm = xd + x1 - t3
    tpn = build_Tpm_n(+1)
    tmn = build_Tpm_n(-1)
    ln = build_Ln()
    one = NormalOrderedOperator.identity()
    K = ParamPoly.K()
    kk1 = K * (K + 1)
    kk1m = K * (K - 1)
    cas = -compose(tp, tm) + compose(t3, t3) - t3
    return [
        ("[T+,T-] + 2 T3", commutator(tp, tm) + 2 * t3),
        ("[T+,T3] + T+", commutator(tp, t3) + tp),
        ("[T-,T3] - T-", commutator(tm, t3) - tm),
        ("(T-^n - 1) T+^n - Ln - K(K+1)", compose(tmn - one, tpn) - ln - kk1 * one),
        ("(T+^n + 1) T-^n - Ln - K(K-1)", compose(tpn + one, tmn) - ln - kk1m * one),
        ("T^2 - J(J+1)", cas - _poly_jj1() * one),
    ]


def extra_identity_checks(t3: NormalOrderedOperator | None = None) -> list[tuple[str, NormalOrderedOperator]]:
    """Supplementary exact zeros: the Casimir mirror and the definitional T_pm."""
    if t3 is None:
        t3 = build_T3()
    xd = NormalOrderedOperator({(1, 1): 1})
    x1 = NormalOrderedOperator.x_power(1)
    tp = -xd + x1 - t3
    tm = xd + x1 - t3
    direct = -compose(tp, tm) + compose(t3, t3) - t3
    mirrored = -compose(tm, tp) + compose(t3, t3) + t3
    return [
        ("casimir mirror - casimir", mirrored - direct),
        ("T+ - (T+^n with K -> T3)", tp - replace_K(build_Tpm_n(+1), t3)),
        ("T- - (T-^n with K -> T3)", tm - replace_K(build_Tpm_n(-1), t3)),
    ]
