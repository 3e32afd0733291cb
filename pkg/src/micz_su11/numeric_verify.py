"""Grid-based verification: FD eigensolver oracle, operator action, ladder checks.

The eigensolver is deliberately independent of the closed forms: it
discretizes -chi''/2 - chi/r + J(J+1)/(2r^2) chi = E chi on a uniform
Dirichlet grid and extracts eigenvalues of the symmetric tridiagonal matrix
by Sturm-sequence bisection, so agreement with the algebraic spectrum is a
genuine cross-check and not a tautology.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .analytic_states import (
    angular_residual,
    angular_state,
    chi,
    chi_dn,
    default_angular_mesh,
    radial_state,
)
from .operator_algebra import (
    NumericOperator,
    build_Ln,
    build_T3,
    build_Tpm,
    compose,
    substitute,
)
from .quantum_numbers import HalfInt, MonopoleParams, SectorLabels, energy, make_sector

MIN_NODES_PER_WAVELENGTH = 8

DEFAULT_TOLERANCES = {
    "angular_residual": 1e-9,
    "radial_equation": 1e-9,
    "t3_eigen": 1e-8,
    "t3_spacing": 1e-8,
    "casimir_action": 1e-8,
    "ladder_raise": 1e-7,
    "ladder_lower": 1e-7,
    "ladder_annihilation": 1e-8,
    "spectrum_level": 1e-4,
}


class ConvergenceFailure(RuntimeError):
    """Sturm bisection could not isolate an eigenvalue."""


class GridTooCoarse(ValueError):
    """Fewer than the required nodes per expected wavelength."""


class StencilUnsupported(ValueError):
    """Finite-difference path asked for a derivative order above 4."""


@dataclass(frozen=True)
class RadialGrid:
    """Uniform interior nodes r_i = i h, h = rmax/(npoints+1); Dirichlet ends."""

    rmax: float
    npoints: int

    def __post_init__(self):
        if self.rmax <= 0.0:
            raise ValueError(f"rmax must be positive, got {self.rmax}")
        if self.npoints < 16:
            raise ValueError(f"need at least 16 grid points, got {self.npoints}")

    @property
    def h(self) -> float:
        return self.rmax / (self.npoints + 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(1, self.npoints + 1, dtype=float)


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.npoints,):
            raise ValueError(f"expected {self.grid.npoints} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("grid function contains non-finite entries")
        object.__setattr__(self, "values", vals)

    def inner(self, other: "GridFunction") -> float:
        return float(self.grid.h * np.dot(self.values, other.values))

    def norm(self) -> float:
        return math.sqrt(self.inner(self))


def sample(grid: RadialGrid, fn) -> GridFunction:
    return GridFunction(grid, fn(grid.nodes))


@dataclass
class VerificationReport:
    check_name: str
    inputs: dict
    residual: float
    tolerance: float
    passed: bool
    runtime_ms: float
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "inputs": self.inputs,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "runtime_ms": self.runtime_ms,
            "details": self.details,
        }


def _report(name, inputs, residual, tolerance, t0, details=None) -> VerificationReport:
    return VerificationReport(
        check_name=name,
        inputs=inputs,
        residual=float(residual),
        tolerance=float(tolerance),
        passed=bool(residual <= tolerance),
        runtime_ms=(time.perf_counter() - t0) * 1000.0,
        details=details or {},
    )


def _sector_inputs(sector: SectorLabels, grid: RadialGrid | None = None, n: HalfInt | None = None) -> dict:
    p = sector.params
    out = {"s": str(p.s), "c1": p.c1, "c2": p.c2, "m": str(sector.m), "j": str(sector.j)}
    if n is not None:
        out["n"] = str(n)
    if grid is not None:
        out["rmax"] = grid.rmax
        out["npoints"] = grid.npoints
    return out


# ---------------------------------------------------------------------------
# Independent eigensolver oracle
# ---------------------------------------------------------------------------

def _sturm_count(diag: list[float], e2: float, lam: float) -> int:
    """Number of eigenvalues strictly below lam (LDL^T pivot signs)."""
    count = 0
    q = diag[0] - lam
    if q < 0.0:
        count += 1
    for d in diag[1:]:
        if q == 0.0:
            q = 1e-300
        q = d - lam - e2 / q
        if q < 0.0:
            count += 1
    return count


def _bisect_eigenvalue(diag: list[float], e2: float, k: int, lo: float, hi: float) -> float:
    for _ in range(256):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            return mid
        if _sturm_count(diag, e2, mid) > k:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-14 * max(1.0, abs(lo), abs(hi)):
            return 0.5 * (lo + hi)
    raise ConvergenceFailure(f"bisection stalled for eigenvalue {k} in [{lo}, {hi}]")


def eig_oracle(J: float, grid: RadialGrid, count: int) -> list[float]:
    """Lowest `count` eigenvalues of the radial problem at angular label J.

    Discretization: diagonal 1/h^2 + V(r_i) with V = -1/r + J(J+1)/(2 r^2),
    off-diagonal -1/(2 h^2); eigenvalues by Sturm-sequence bisection between
    Gershgorin bounds, sorted ascending.
    """
    if J < 0.0:
        raise ValueError(f"J must be non-negative, got {J}")
    if count < 0 or count > grid.npoints:
        raise ValueError(f"count must lie in [0, {grid.npoints}], got {count}")
    if count == 0:
        return []
    # ground-state de Broglie scale of the J tower; coarser grids cannot
    # resolve even the lowest eigenfunction
    wavelength = 2.0 * math.pi * (J + 1.0)
    if grid.h * MIN_NODES_PER_WAVELENGTH > wavelength:
        raise GridTooCoarse(
            f"h={grid.h:.4g} gives fewer than {MIN_NODES_PER_WAVELENGTH} nodes "
            f"per expected wavelength {wavelength:.4g}"
        )
    r = grid.nodes
    h = grid.h
    off = -1.0 / (2.0 * h * h)
    diag_arr = 1.0 / (h * h) - 1.0 / r + J * (J + 1.0) / (2.0 * r * r)
    diag = diag_arr.tolist()
    e2 = off * off
    lo = min(diag) - 2.0 * abs(off)
    hi = max(diag) + 2.0 * abs(off)
    return [_bisect_eigenvalue(diag, e2, k, lo, hi) for k in range(count)]


# ---------------------------------------------------------------------------
# Operator application on grid functions
# ---------------------------------------------------------------------------

def _fd_weights(offsets, m: int) -> np.ndarray:
    """Fornberg weights for the m-th derivative at 0 on integer offsets."""
    x = [float(o) for o in offsets]
    n = len(x)
    C = np.zeros((n, m + 1))
    C[0, 0] = 1.0
    c1 = 1.0
    c4 = x[0]
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i]
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    C[i, k] = c1 * (k * C[i - 1, k - 1] - c5 * C[i - 1, k]) / c2
                C[i, 0] = -c1 * c5 * C[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                C[j, k] = (c4 * C[j, k] - k * C[j, k - 1]) / c3
            C[j, 0] = c4 * C[j, 0] / c3
        c1 = c2
    return C[:, m]


def _fd_derivative(vals: np.ndarray, h: float, m: int) -> np.ndarray:
    """4th-order central differences, one-sided closures at the edges."""
    width = 5 if m <= 2 else 7
    half = width // 2
    n = len(vals)
    if n < width:
        raise StencilUnsupported(f"grid too small for the {width}-point stencil")
    out = np.empty_like(vals)
    wc = _fd_weights(range(-half, half + 1), m)
    out[half : n - half] = np.convolve(vals, wc[::-1], mode="valid")
    for i in range(half):
        w = _fd_weights([o - i for o in range(width)], m)
        out[i] = np.dot(w, vals[:width])
        w = _fd_weights([o - (n - 1 - i) for o in range(n - width, n)], m)
        out[n - 1 - i] = np.dot(w, vals[n - width :])
    return out / h**m


def apply_operator(numop: NumericOperator, f: GridFunction, derivatives=None) -> GridFunction:
    """Apply sum of coeff x^xpow D^dorder to f per node.

    `derivatives(x, order)` supplies analytic derivative samples; without it,
    orders up to 4 fall back to the FD stencils.
    """
    if derivatives is None and numop.max_dorder() > 4:
        raise StencilUnsupported(
            f"operator needs D^{numop.max_dorder()}; finite differences stop at 4 "
            "(pass analytic derivative callbacks)"
        )
    x = f.grid.nodes
    cache = {0: f.values}
    out = np.zeros_like(f.values)
    for xp, dq, c in numop.terms:
        if dq not in cache:
            if derivatives is not None:
                cache[dq] = np.asarray(derivatives(x, dq), dtype=float)
            else:
                cache[dq] = _fd_derivative(f.values, f.grid.h, dq)
        term = cache[dq] if xp == 0 else cache[dq] * x ** float(xp)
        out += c * term
    return GridFunction(f.grid, out)


# ---------------------------------------------------------------------------
# Verification pipelines
# ---------------------------------------------------------------------------

def _as_halfint(n) -> HalfInt:
    return n if isinstance(n, HalfInt) else HalfInt.from_int(n)


def _state_and_samples(sector: SectorLabels, n: HalfInt, grid: RadialGrid):
    state = radial_state(sector, n)
    f = GridFunction(grid, chi(state, grid.nodes))

    def derivs(xs, order):
        return chi_dn(state, xs, order)

    return state, f, derivs


def ladder_check(sector: SectorLabels, n, sign: int, grid: RadialGrid, tol: float | None = None) -> VerificationReport:
    """Similarity of T_pm chi_n against chi_{n+-1}; annihilation at the bottom.

    The proportionality constant is never asserted, only measured and
    reported; the sign of the overlap is discarded.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    t0 = time.perf_counter()
    n = _as_halfint(n)
    state, f, derivs = _state_and_samples(sector, n, grid)
    numop = substitute(build_Tpm(sign), sector.bigJ, state.level.K)
    y = apply_operator(numop, f, derivatives=derivs)
    bottom = n - sector.j == 1
    inputs = _sector_inputs(sector, grid, n)
    if sign == -1 and bottom:
        residual = y.norm() / f.norm()
        tolerance = DEFAULT_TOLERANCES["ladder_annihilation"] if tol is None else tol
        return _report("ladder_annihilation", inputs, residual, tolerance, t0)
    tstate, t, _ = _state_and_samples(sector, n + sign, grid)
    overlap = y.inner(t)
    sim = abs(overlap) / (y.norm() * t.norm())
    residual = max(0.0, 1.0 - sim)
    name = "ladder_raise" if sign == 1 else "ladder_lower"
    tolerance = DEFAULT_TOLERANCES[name] if tol is None else tol
    details = {"proportionality_ratio": overlap / t.inner(t)}
    return _report(name, inputs, residual, tolerance, t0, details)


def t3_eigen_check(sector: SectorLabels, n, grid: RadialGrid, tol: float | None = None) -> VerificationReport:
    """||T3 chi - K chi||/||chi|| plus the shifted eigenvalues of T3 on T_pm chi."""
    t0 = time.perf_counter()
    n = _as_halfint(n)
    state, f, derivs = _state_and_samples(sector, n, grid)
    K = state.level.K
    J = sector.bigJ
    fnorm = f.norm()
    y = apply_operator(substitute(build_T3(), J, K), f, derivatives=derivs)
    r_main = GridFunction(grid, y.values - K * f.values).norm() / fnorm
    details = {"measured_eigenvalue": y.inner(f) / f.inner(f)}
    residual = r_main
    bottom = n - sector.j == 1
    for sign, tag in ((1, "raised"), (-1, "lowered")):
        if sign == -1 and bottom:
            continue
        z = apply_operator(substitute(build_Tpm(sign), J, K), f, derivatives=derivs)
        w = apply_operator(
            substitute(compose(build_T3(), build_Tpm(sign)), J, K), f, derivatives=derivs
        )
        znorm = z.norm()
        r_shift = GridFunction(grid, w.values - (K + sign) * z.values).norm() / znorm
        details[f"{tag}_eigenvalue"] = w.inner(z) / z.inner(z)
        residual = max(residual, r_shift)
    tolerance = DEFAULT_TOLERANCES["t3_eigen"] if tol is None else tol
    return _report("t3_eigen", _sector_inputs(sector, grid, n), residual, tolerance, t0, details)


def t3_spacing_check(sector: SectorLabels, n, grid: RadialGrid, tol: float | None = None) -> VerificationReport:
    """Measured T3 eigenvalue difference between levels n+1 and n, against 1."""
    t0 = time.perf_counter()
    n = _as_halfint(n)
    J = sector.bigJ
    measured = []
    for level_n in (n, n + 1):
        state, f, derivs = _state_and_samples(sector, level_n, grid)
        y = apply_operator(substitute(build_T3(), J, state.level.K), f, derivatives=derivs)
        measured.append(y.inner(f) / f.inner(f))
    spacing = measured[1] - measured[0]
    tolerance = DEFAULT_TOLERANCES["t3_spacing"] if tol is None else tol
    return _report(
        "t3_spacing",
        _sector_inputs(sector, grid, n),
        abs(spacing - 1.0),
        tolerance,
        t0,
        {"spacing": spacing},
    )


def casimir_check(sector: SectorLabels, n, grid: RadialGrid, tol: float | None = None) -> VerificationReport:
    """Casimir action assembled from uncancelled pieces; target J(J+1) chi.

    -T+T- + T3^2 - T3 and the mirror -T-T+ + T3^2 + T3 are each applied as
    three separate composed operators so the cancellation down to the
    constant happens numerically on the grid.
    """
    t0 = time.perf_counter()
    n = _as_halfint(n)
    state, f, derivs = _state_and_samples(sector, n, grid)
    J = sector.bigJ
    K = state.level.K
    fnorm = f.norm()
    target = sector.sep_const * f.values
    t3 = build_T3()
    tp = build_Tpm(+1)
    tm = build_Tpm(-1)
    t3f = apply_operator(substitute(t3, J, K), f, derivatives=derivs).values
    t3sq = apply_operator(substitute(compose(t3, t3), J, K), f, derivatives=derivs).values
    pm = apply_operator(substitute(compose(tp, tm), J, K), f, derivatives=derivs).values
    mp = apply_operator(substitute(compose(tm, tp), J, K), f, derivatives=derivs).values
    res_direct = GridFunction(grid, -pm + t3sq - t3f - target).norm() / fnorm
    res_mirror = GridFunction(grid, -mp + t3sq + t3f - target).norm() / fnorm
    details = {"direct": float(res_direct), "mirror": float(res_mirror)}
    tolerance = DEFAULT_TOLERANCES["casimir_action"] if tol is None else tol
    return _report(
        "casimir_action",
        _sector_inputs(sector, grid, n),
        max(res_direct, res_mirror),
        tolerance,
        t0,
        details,
    )


def radial_equation_check(
    sector: SectorLabels,
    n,
    grid: RadialGrid,
    tol: float | None = None,
    window: tuple[float, float] = (0.01, 40.0),
) -> VerificationReport:
    """Max-norm residual of (-x^2 D^2 - 2Kx + x^2) chi = -J(J+1) chi on the window."""
    t0 = time.perf_counter()
    n = _as_halfint(n)
    state, f, derivs = _state_and_samples(sector, n, grid)
    numop = substitute(build_Ln(), sector.bigJ, state.level.K)
    y = apply_operator(numop, f, derivatives=derivs)
    resid = y.values + sector.sep_const * f.values
    x = grid.nodes
    mask = (x >= window[0]) & (x <= window[1])
    if not np.any(mask):
        mask = np.ones_like(x, dtype=bool)
    residual = float(np.max(np.abs(resid[mask])) / np.max(np.abs(f.values[mask])))
    tolerance = DEFAULT_TOLERANCES["radial_equation"] if tol is None else tol
    return _report("radial_equation", _sector_inputs(sector, grid, n), residual, tolerance, t0)


def angular_residual_check(
    sector: SectorLabels,
    ntheta: int = 200,
    nphi: int = 8,
    tol: float | None = None,
) -> VerificationReport:
    t0 = time.perf_counter()
    thetas, phis = default_angular_mesh(ntheta, nphi)
    residual = angular_residual(angular_state(sector), thetas, phis)
    inputs = _sector_inputs(sector)
    inputs["ntheta"] = ntheta
    inputs["nphi"] = nphi
    tolerance = DEFAULT_TOLERANCES["angular_residual"] if tol is None else tol
    return _report("angular_residual", inputs, residual, tolerance, t0)


def spectrum_cross_check(
    params: MonopoleParams,
    m: HalfInt,
    j: HalfInt,
    levels: int,
    grid: RadialGrid,
    tol: float = DEFAULT_TOLERANCES["spectrum_level"],
) -> list[VerificationReport]:
    """Per-level relative error of the FD oracle against the analytic spectrum."""
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    sector = make_sector(params, m, j)
    t0 = time.perf_counter()
    oracle_vals = eig_oracle(sector.bigJ, grid, levels)
    reports = []
    for i, ev in enumerate(oracle_vals):
        level = energy(sector, sector.j + (i + 1))
        rel = abs(ev - level.energy) / abs(level.energy)
        reports.append(
            _report(
                "spectrum_level",
                _sector_inputs(sector, grid, level.n),
                rel,
                tol,
                t0,
                {"oracle_energy": ev, "analytic_energy": level.energy},
            )
        )
        t0 = time.perf_counter()
    return reports


def verify_states_suite(
    params: MonopoleParams,
    m: HalfInt,
    j: HalfInt,
    nlevels: int = 5,
    grid: RadialGrid | None = None,
    ntheta: int = 200,
    nphi: int = 8,
    tol: float | None = None,
) -> list[VerificationReport]:
    """The full per-sector state-level suite used by the CLI.

    Runs the angular residual, then per level the radial-equation residual,
    the T3 eigenvalue (with shifted eigenvalues), the Casimir action, the
    raising similarity, the in-tower lowering similarity and the bottom
    annihilation, plus the T3 spacing between consecutive levels.
    """
    sector = make_sector(params, m, j)
    if grid is None:
        k_top = sector.bigJ + nlevels
        grid = RadialGrid(rmax=10.0 + 4.0 * k_top, npoints=4000)
    reports = [angular_residual_check(sector, ntheta=ntheta, nphi=nphi, tol=tol)]
    bottom = sector.j + 1
    for i in range(nlevels):
        n = bottom + i
        reports.append(radial_equation_check(sector, n, grid, tol=tol))
        reports.append(t3_eigen_check(sector, n, grid, tol=tol))
        reports.append(casimir_check(sector, n, grid, tol=tol))
        reports.append(ladder_check(sector, n, +1, grid, tol=tol))
        # at i == 0 the lowering check is the bottom annihilation
        reports.append(ladder_check(sector, n, -1, grid, tol=tol))
        if i + 1 < nlevels:
            reports.append(t3_spacing_check(sector, n, grid, tol=tol))
    return reports
