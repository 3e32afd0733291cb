"""Command-line front end: spectrum tables, eigenfunction dumps, verification suites.

Exit codes: 0 all pass, 1 verification failure, 2 usage or validation error.
Output is deterministic: floats are printed with 17 significant digits, CSV
uses LF line endings, JSON documents carry the "su11-micz/1" schema key.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from .analytic_states import (
    DomainError,
    angular_Z,
    angular_state,
    chi,
    chi_d1,
    chi_d2,
    radial_state,
)
from .numeric_verify import (
    ConvergenceFailure,
    GridTooCoarse,
    RadialGrid,
    eig_oracle,
    verify_states_suite,
)
from .operator_algebra import (
    NormalOrderedOperator,
    extra_identity_checks,
    identity_suite,
    monomial_action,
    build_T3,
)
from .quantum_numbers import (
    HalfInt,
    InvalidLevel,
    InvalidQuantumNumbers,
    MonopoleParams,
    energy,
    levels,
    make_sector,
)
from .special_functions import DegreeCapExceeded, ParamOutOfRange

SCHEMA = "su11-micz/1"
EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2


# ---------------------------------------------------------------------------
# Deterministic serialization
# ---------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"refusing to serialize non-finite value {x}")
    return format(x, ".17g")


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt_float(v)
    return str(v)


def _csv_doc(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _json_doc(obj) -> str:
    return _json_render(obj) + "\n"


def _json_render(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, HalfInt):
        return json.dumps(str(obj))
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json_render(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(json.dumps(str(k)) + ": " + _json_render(v) for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _sector_config(args) -> dict:
    return {
        "s": str(args.s),
        "c1": args.c1,
        "c2": args.c2,
        "m": str(args.m),
        "j": str(args.j),
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    if args.nmax < 1:
        raise InvalidLevel(f"--nmax must be at least 1, got {args.nmax}")
    sector = make_sector(MonopoleParams(args.s, args.c1, args.c2), args.m, args.j)
    header = ["s", "m", "j", "n", "delta1", "delta2", "J", "K", "E"]
    rows = []
    for level in levels(sector, args.nmax):
        rows.append(
            [
                str(args.s),
                str(args.m),
                str(args.j),
                str(level.n),
                sector.delta1,
                sector.delta2,
                sector.bigJ,
                level.K,
                level.energy,
            ]
        )
    if args.format == "json":
        doc = _json_doc(
            {
                "schema": SCHEMA,
                "config": {"command": "spectrum", **_sector_config(args), "nmax": args.nmax},
                "rows": [dict(zip(header, row)) for row in rows],
            }
        )
    else:
        doc = _csv_doc(header, rows)
    _emit(doc, args.out)
    return EXIT_OK


def cmd_eigenfunction(args) -> int:
    sector = make_sector(MonopoleParams(args.s, args.c1, args.c2), args.m, args.j)
    if args.kind == "radial":
        if args.n is None:
            raise InvalidLevel("radial eigenfunction requires --n")
        state = radial_state(sector, args.n)
        xmax = args.rmax if args.rmax is not None else 10.0 + 4.0 * state.level.K
        xs = xmax * np.arange(1, args.npoints + 1) / args.npoints
        header = ["x", "chi", "chi_d1", "chi_d2"]
        rows = list(zip(xs, chi(state, xs), chi_d1(state, xs), chi_d2(state, xs)))
        config = {"command": "eigenfunction", "kind": "radial", **_sector_config(args),
                  "n": str(args.n), "rmax": xmax, "npoints": args.npoints}
    else:
        state = angular_state(sector)
        thetas = math.pi * np.arange(1, args.npoints + 1) / (args.npoints + 1.0)
        z = angular_Z(state, thetas, args.phi)
        header = ["theta", "re_z", "im_z"]
        rows = list(zip(thetas, z.real, z.imag))
        config = {"command": "eigenfunction", "kind": "angular", **_sector_config(args),
                  "phi": args.phi, "npoints": args.npoints}
    rows = [[float(v) for v in row] for row in rows]
    if args.format == "json":
        doc = _json_doc({"schema": SCHEMA, "config": config,
                         "rows": [dict(zip(header, row)) for row in rows]})
    else:
        doc = _csv_doc(header, rows)
    _emit(doc, args.out)
    return EXIT_OK


def cmd_verify_algebra(args) -> int:
    t3 = build_T3()
    if args.corrupt_identity:
        # test hook: flips the sign of the x/2 term of T3
        t3 = t3 - NormalOrderedOperator.x_power(1)
    checks = identity_suite(t3)
    reports = []
    failed = []
    for name, diff in checks:
        rendered = diff.render()
        ok = diff.is_zero
        print(f"identity {name}: {rendered}  {'PASS' if ok else 'FAIL'}")
        reports.append({"check_name": f"identity: {name}", "difference": rendered, "passed": ok})
        if not ok:
            failed.append((name, rendered))
    for name, diff in extra_identity_checks(t3):
        rendered = diff.render()
        ok = diff.is_zero
        print(f"supplementary {name}: {rendered}  {'PASS' if ok else 'FAIL'}")
        reports.append({"check_name": f"supplementary: {name}", "difference": rendered, "passed": ok})
        if not ok:
            failed.append((name, rendered))

    kmax = args.deg_check_max
    sweep_ok = True
    for name, diff in checks:
        for k in range(-4, kmax + 1):
            if monomial_action(diff, k):
                sweep_ok = False
                failed.append((f"{name} acting on x^{k}", diff.render()))
                break
    print(f"oracle sweep k in [-4, {kmax}]: {'PASS' if sweep_ok else 'FAIL'}")
    reports.append({"check_name": "monomial_oracle_sweep", "k_min": -4, "k_max": kmax, "passed": sweep_ok})

    n_ok = sum(1 for _, diff in checks if diff.is_zero)
    print(f"{n_ok}/{len(checks)} identities PASS")
    if args.out or args.format == "csv":
        if args.format == "json":
            doc = _json_doc({"schema": SCHEMA,
                             "config": {"command": "verify-algebra", "deg_check_max": kmax},
                             "reports": reports})
        else:
            doc = _csv_doc(["check_name", "passed", "difference"],
                           [[r["check_name"], r["passed"], r.get("difference", "")] for r in reports])
        _emit(doc, args.out)
    if failed:
        name, rendered = failed[0]
        print(f"FAILED {name}: {rendered}", file=sys.stderr)
        return EXIT_VERIFY_FAIL
    return EXIT_OK


def cmd_verify_states(args) -> int:
    params = MonopoleParams(args.s, args.c1, args.c2)
    sector = make_sector(params, args.m, args.j)
    if args.nmax < 1:
        raise InvalidLevel(f"--nmax must be at least 1, got {args.nmax}")
    grid = None
    if args.rmax is not None or args.npoints is not None:
        rmax = args.rmax if args.rmax is not None else 10.0 + 4.0 * (sector.bigJ + args.nmax)
        grid = RadialGrid(rmax=rmax, npoints=args.npoints if args.npoints is not None else 4000)
    reports = verify_states_suite(params, args.m, args.j, nlevels=args.nmax, grid=grid, tol=args.tol)
    for r in reports:
        label = r.inputs.get("n", "-")
        print(f"{'PASS' if r.passed else 'FAIL'} {r.check_name:20s} n={label:5s} "
              f"residual={r.residual:.3e} tol={r.tolerance:.1e}")
    n_fail = sum(1 for r in reports if not r.passed)
    print(f"{len(reports) - n_fail}/{len(reports)} checks PASS")
    if args.out or args.format == "csv":
        config = {"command": "verify-states", **_sector_config(args), "nmax": args.nmax,
                  "rmax": grid.rmax if grid else None, "npoints": grid.npoints if grid else None,
                  "tol": args.tol}
        if args.format == "json":
            doc = _json_doc({"schema": SCHEMA, "config": config,
                             "reports": [r.to_dict() for r in reports]})
        else:
            doc = _csv_doc(
                ["check_name", "n", "residual", "tolerance", "passed", "runtime_ms"],
                [[r.check_name, r.inputs.get("n", ""), r.residual, r.tolerance, r.passed, r.runtime_ms]
                 for r in reports],
            )
        _emit(doc, args.out)
    return EXIT_VERIFY_FAIL if n_fail else EXIT_OK


def cmd_oracle(args) -> int:
    if args.nmax < 1:
        raise InvalidLevel(f"--nmax must be at least 1, got {args.nmax}")
    if args.bigJ is not None:
        if args.bigJ < 0:
            raise InvalidQuantumNumbers(f"--bigJ must be non-negative, got {args.bigJ}")
        J = args.bigJ
        ks = [J + 1.0 + i for i in range(args.nmax)]
        labels = [""] * args.nmax
        inputs_base = {"bigJ": J}
        config = {"command": "oracle", "bigJ": J}
    else:
        if args.s is None or args.m is None or args.j is None:
            raise InvalidQuantumNumbers("oracle needs either --bigJ or the sector flags --s --m --j")
        sector = make_sector(MonopoleParams(args.s, args.c1, args.c2), args.m, args.j)
        J = sector.bigJ
        lvls = levels(sector, args.nmax)
        ks = [lv.K for lv in lvls]
        labels = [str(lv.n) for lv in lvls]
        inputs_base = _sector_config(args)
        config = {"command": "oracle", **_sector_config(args)}
    rmax = args.rmax if args.rmax is not None else 12.0 * ks[-1] ** 2
    npoints = args.npoints if args.npoints is not None else 6000
    grid = RadialGrid(rmax=rmax, npoints=npoints)
    config.update({"nmax": args.nmax, "rmax": rmax, "npoints": npoints, "tol": args.tol})
    t0 = time.perf_counter()
    oracle_vals = eig_oracle(J, grid, args.nmax)
    solve_ms = (time.perf_counter() - t0) * 1000.0
    header = ["level", "K", "E_oracle", "E_analytic", "rel_error", "passed"]
    rows = []
    reports = []
    all_ok = True
    for label, K, ev in zip(labels, ks, oracle_vals):
        exact = -1.0 / (2.0 * K * K)
        rel = abs(ev - exact) / abs(exact)
        ok = rel <= args.tol
        all_ok = all_ok and ok
        rows.append([label, K, ev, exact, rel, ok])
        inputs = dict(inputs_base)
        if label:
            inputs["n"] = label
        inputs.update({"rmax": rmax, "npoints": npoints})
        reports.append(
            {
                "check_name": "spectrum_level",
                "inputs": inputs,
                "residual": rel,
                "tolerance": args.tol,
                "passed": ok,
                "runtime_ms": solve_ms / args.nmax,
                "details": {"oracle_energy": ev, "analytic_energy": exact, "K": K},
            }
        )
    if args.format == "json":
        doc = _json_doc({"schema": SCHEMA, "config": config, "reports": reports})
    else:
        doc = _csv_doc(header, rows)
    _emit(doc, args.out)
    return EXIT_OK if all_ok else EXIT_VERIFY_FAIL


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_sector_args(sp, required: bool = True) -> None:
    sp.add_argument("--s", type=HalfInt.parse, required=required,
                    help="monopole charge, e.g. 1/2 or 0.5")
    sp.add_argument("--c1", type=float, default=0.0, help="axial coupling c1 >= 0")
    sp.add_argument("--c2", type=float, default=0.0, help="axial coupling c2 >= 0")
    sp.add_argument("--m", type=HalfInt.parse, required=required,
                    help="z-projection quantum number")
    sp.add_argument("--j", type=HalfInt.parse, required=required,
                    help="total angular momentum quantum number")


def _add_output_args(sp, default_format: str) -> None:
    sp.add_argument("--format", choices=("csv", "json"), default=default_format)
    sp.add_argument("--out", default=None, help="write the document to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="micz-su11",
        description="Spectrum tables, eigenfunctions and su(1,1) verification "
                    "suites for the generalized MICZ-Kepler problem.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="analytic bound-state table of one (m, j) sector")
    _add_sector_args(sp)
    sp.add_argument("--nmax", type=int, default=32, help="number of levels starting at n = j+1")
    _add_output_args(sp, "csv")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("eigenfunction", help="sampled radial chi or angular Z tables")
    _add_sector_args(sp)
    sp.add_argument("--kind", choices=("radial", "angular"), default="radial")
    sp.add_argument("--n", type=HalfInt.parse, default=None, help="principal quantum number (radial)")
    sp.add_argument("--rmax", type=float, default=None,
                    help="radial window in the scaled variable (default 10 + 4K)")
    sp.add_argument("--npoints", type=int, default=512, help="number of sample points")
    sp.add_argument("--phi", type=float, default=0.0, help="azimuth for the angular table")
    _add_output_args(sp, "csv")
    sp.set_defaults(func=cmd_eigenfunction)

    sp = sub.add_parser("verify-algebra", help="exact su(1,1) and factorization identities")
    sp.add_argument("--deg-check-max", type=int, default=12,
                    help="upper monomial power for the action oracle sweep")
    sp.add_argument("--corrupt-identity", action="store_true", help=argparse.SUPPRESS)
    _add_output_args(sp, "json")
    sp.set_defaults(func=cmd_verify_algebra)

    sp = sub.add_parser("verify-states", help="numeric state-level verification suite")
    _add_sector_args(sp)
    sp.add_argument("--nmax", type=int, default=5, help="number of levels above the tower bottom")
    sp.add_argument("--rmax", type=float, default=None, help="grid window (scaled variable)")
    sp.add_argument("--npoints", type=int, default=None, help="grid points (default 4000)")
    sp.add_argument("--tol", type=float, default=None, help="override every check tolerance")
    _add_output_args(sp, "json")
    sp.set_defaults(func=cmd_verify_states)

    sp = sub.add_parser("oracle", help="finite-difference eigenvalues vs the analytic spectrum")
    _add_sector_args(sp, required=False)
    sp.add_argument("--bigJ", type=float, default=None,
                    help="angular label J directly (bypasses the sector flags)")
    sp.add_argument("--nmax", type=int, default=3, help="number of eigenvalues")
    sp.add_argument("--rmax", type=float, default=None, help="grid extent (default 12 K_max^2)")
    sp.add_argument("--npoints", type=int, default=None, help="grid points (default 6000)")
    sp.add_argument("--tol", type=float, default=1e-4, help="relative-error pass threshold")
    _add_output_args(sp, "csv")
    sp.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidQuantumNumbers, InvalidLevel, DomainError, ParamOutOfRange,
            DegreeCapExceeded, GridTooCoarse) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
