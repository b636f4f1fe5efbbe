"""Batch runner: config parsing, verification suites, tables, and figures.

A run reads one JSON config, executes the requested suites, and writes per
suite a delimited table (CSV or JSON) plus a rendered PNG figure into the
output directory.  Exit status: 0 all residuals within tolerance, 1 some
residual exceeded tolerance (tables are still written), 2 invalid config.
"""

from __future__ import annotations

import argparse
import json
import os
import sys as _sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from . import kernel as kernel_mod
from . import rhp as rhp_mod
from . import toda as toda_mod
from .errors import ConfigInvalid, IoFailure, SkewrhError
from .linalg import Precision
from .poly import Potential, dual_map
from .quadrature import QuadConfig
from .skewcore import (beta, count_sign_changes, debruijn_check, get_system)

ALL_SUITES = ("polys", "kernel", "rhp", "toda", "debruijn")

TOL = {
    "h_positive": 0.0,
    "dual_roundtrip": 1e-8,
    "beta_vanish": 1e-8,
    "cd_gap_offdiag": 1e-8,
    "cd_gap_diag": 1e-6,
    "density_integral": 1e-6,
    "jump": 1e-6,
    "det": 1e-8,
    "symmetry": 1e-7,
    "ode": 1e-5,
    "ode_d4": 1e-4,
    "constraint": 1e-7,
    "debruijn": 1e-6,
}


@dataclass
class RunConfig:
    coeffs: list
    t: list = field(default_factory=lambda: [0.0])
    n_max: int = 2
    quad: QuadConfig = field(default_factory=QuadConfig)
    precision: Precision = Precision.BINARY64
    suites: tuple = ALL_SUITES
    grid_lo: float = -3.0
    grid_hi: float = 3.0
    grid_points: int = 61
    out_path: str = "out"
    out_format: str = "csv"


def parse_config(doc: dict) -> RunConfig:
    try:
        pot = doc["potential"]
        coeffs = [float(c) for c in pot["coeffs"]]
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigInvalid(f"potential.coeffs missing or malformed: {e}")
    try:
        Potential(tuple(coeffs))
    except ValueError as e:
        raise ConfigInvalid(str(e))

    t = doc.get("t", 0.0)
    t = [float(v) for v in (t if isinstance(t, list) else [t])]
    n_max = int(doc.get("n_max", 2))
    if n_max < 0:
        raise ConfigInvalid("n_max must be nonnegative")

    quad_doc = doc.get("quad", {})
    try:
        quad = QuadConfig(
            nodes_per_panel=int(quad_doc.get("nodes_per_panel", 32)),
            rel_tol=float(quad_doc.get("rel_tol", 1e-12)),
            truncation_drop=float(quad_doc.get("truncation_drop", 1e-18)),
        )
    except (TypeError, ValueError) as e:
        raise ConfigInvalid(f"bad quad settings: {e}")

    prec_name = doc.get("precision", "binary64")
    try:
        precision = Precision(prec_name)
    except ValueError:
        raise ConfigInvalid(f"unknown precision {prec_name!r}")
    if precision is Precision.EXTENDED:
        raise ConfigInvalid(
            "extended precision is declared but not implemented on this "
            "platform (no long-double linear algebra)")

    suites = tuple(doc.get("suites", ALL_SUITES))
    for s in suites:
        if s not in ALL_SUITES:
            raise ConfigInvalid(f"unknown suite {s!r}")
    if not suites:
        raise ConfigInvalid("at least one suite is required")

    grid = doc.get("grid", {})
    lo = float(grid.get("lo", -3.0))
    hi = float(grid.get("hi", 3.0))
    points = int(grid.get("points", 61))
    if points < 2 or not hi > lo:
        raise ConfigInvalid("grid needs hi > lo and points >= 2")

    fmt = doc.get("out_format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigInvalid(f"unknown output format {fmt!r}")

    return RunConfig(coeffs=coeffs, t=t, n_max=n_max, quad=quad,
                     precision=precision, suites=suites, grid_lo=lo,
                     grid_hi=hi, grid_points=points,
                     out_path=str(doc.get("out_path", "out")), out_format=fmt)


def thread_count() -> int:
    raw = os.environ.get("SKEWRH_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return max(1, min(n, 64)) if n > 0 else min(os.cpu_count() or 1, 8)


# --------------------------------------------------------------------------
# table emission
# --------------------------------------------------------------------------

def _fmt(v) -> list:
    if isinstance(v, complex):
        return [format(v.real, ".17g"), format(v.imag, ".17g")]
    if isinstance(v, float):
        return [format(v, ".17g")]
    return [str(v)]


def emit(table: dict, fmt: str, path: str) -> None:
    """Write one table; CSV uses 17 significant digits and re/im column
    pairs for complex values, JSON nests {meta, rows}."""
    rows = table["rows"]
    if not rows:
        raise IoFailure(f"refusing to write empty table to {path}")
    try:
        if fmt == "csv":
            header = []
            for name, v in zip(table["columns"], rows[0]):
                header += ([f"{name}_re", f"{name}_im"]
                           if isinstance(v, complex) else [name])
            lines = [",".join(header)]
            for row in rows:
                cells = []
                for v in row:
                    cells += _fmt(v)
                lines.append(",".join(cells))
            with open(path, "w") as f:
                f.write("\n".join(lines) + "\n")
        else:
            def enc(v):
                if isinstance(v, complex):
                    return {"re": v.real, "im": v.imag}
                if isinstance(v, np.generic):
                    return v.item()
                return v
            doc = {"meta": table.get("meta", {}),
                   "rows": [dict(zip(table["columns"], map(enc, row)))
                            for row in rows]}
            with open(path, "w") as f:
                json.dump(doc, f, indent=1, sort_keys=True)
                f.write("\n")
    except OSError as e:
        raise IoFailure(f"could not write {path}: {e}")


def _save_figure(fig, path: str) -> None:
    fig.savefig(path, dpi=110)
    plt.close(fig)


# --------------------------------------------------------------------------
# suites
# --------------------------------------------------------------------------

def _suite_polys(cfg: RunConfig):
    V = Potential(tuple(cfg.coeffs), cfg.t[0])
    sys = get_system(V, cfg.n_max, cfg.quad)
    cols = ["kind", "index", "coeff_index", "value", "tolerance", "ok"]
    rows = []
    ok = True
    for k, hk in enumerate(sys.h):
        good = hk > 0
        ok &= good
        rows.append(("h", k, -1, complex(hk), TOL["h_positive"], good))
    for m in range(2 * cfg.n_max + 2):
        resid = (dual_map(sys.p(m), V) - sys.psi(m)).max_abs_coeff()
        good = resid <= TOL["dual_roundtrip"] * max(sys.psi(m).max_abs_coeff(), 1.0)
        ok &= good
        rows.append(("dual_residual", m, -1, complex(resid),
                     TOL["dual_roundtrip"], good))
        for kind, p in (("H", sys.basis.poly(m)), ("Psi", sys.psi(m)),
                        ("P", sys.p(m))):
            for ci in range(p.degree + 1):
                rows.append((kind, m, ci, p.coeff(ci), float("nan"), True))
    for n in range(cfg.n_max + 1):
        for j in range(1, V.D):
            r = sys.r(n, j)
            for ci in range(r.degree + 1):
                rows.append(("R%d" % j, n, ci, r.coeff(ci), float("nan"), True))

    fig, ax = plt.subplots(figsize=(7, 4))
    x = np.linspace(cfg.grid_lo, cfg.grid_hi, 400)
    env = np.exp(-np.asarray(V(x)).real)
    for m in range(min(2 * cfg.n_max + 2, 6)):
        ax.plot(x, np.asarray(sys.p(m)(x + 0j)).real * env, label=f"P_{m}")
    ax.set_xlabel("x")
    ax.set_ylabel("P_m(x) exp(-V)")
    ax.legend(fontsize=8)
    ax.set_title("skew-orthogonal polynomials (weighted)")
    return {"columns": cols, "rows": rows}, fig, ok


def _suite_kernel(cfg: RunConfig):
    V = Potential(tuple(cfg.coeffs), cfg.t[0])
    n = max(cfg.n_max, 1)
    sys = get_system(V, n, cfg.quad)
    xs = np.linspace(cfg.grid_lo, cfg.grid_hi, cfg.grid_points)
    cols = ["n", "x", "y", "direct", "cd", "rel_gap", "tolerance", "ok"]
    rows = []
    ok = True

    def eval_row(pt):
        x, y = pt
        ev = kernel_mod.evaluate(sys, n, float(x), float(y), cfg.quad)
        tol = TOL["cd_gap_diag"] if abs(x - y) < kernel_mod.DIAG_BAND \
            else TOL["cd_gap_offdiag"]
        return (n, float(x), float(y), ev.direct, ev.cd, ev.rel_gap, tol,
                bool(ev.rel_gap <= tol))

    pts = [(x, y) for x in xs[:: max(len(xs) // 20, 1)]
           for y in xs[:: max(len(xs) // 20, 1)]]
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        for row in pool.map(eval_row, pts):
            ok &= row[-1]
            rows.append(row)

    total = kernel_mod.density_integral(sys, n, cfg.quad)
    good = abs(total - n) <= TOL["density_integral"]
    ok &= good
    rows.append((n, float("nan"), float("nan"), total, float(n),
                 abs(total - n), TOL["density_integral"], good))

    density = kernel_mod.density_table(sys, n, xs)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot([r[0] for r in density], [r[1] for r in density])
    ax.set_xlabel("x")
    ax.set_ylabel(f"S_{n}(x,x)")
    ax.set_title("one-point density")
    return {"columns": cols, "rows": rows}, fig, ok


def _suite_rhp(cfg: RunConfig):
    V = Potential(tuple(cfg.coeffs), cfg.t[0])
    n_top = max(cfg.n_max, 1)
    sys = get_system(V, n_top, cfg.quad)
    D = V.D
    cols = ["which", "n", "check", "where", "value", "tolerance", "ok"]
    rows = []
    ok = True

    def add(which, n, check, where, value, tol):
        nonlocal ok
        good = value <= tol
        ok &= good
        rows.append((which, n, check, where, value, tol, good))

    pts = [1.3 + 0j, -1.3 + 0j]
    pts += [1.3 * np.exp(2j * np.pi * k / D) for k in range(1, D) if k != D // 2]
    for n in range(1, n_top + 1):
        for which, asm, extra in (
                (rhp_mod.EVEN_A, rhp_mod.assemble_even, []),
                (rhp_mod.ODD_B, rhp_mod.assemble_odd,
                 [np.exp(1j * np.pi / 3)])):
            for x in pts + extra:
                r = rhp_mod.jump_residual(sys, which, n, x, cfg.quad)
                add(which, n, "jump", f"{complex(x):.3f}", r, TOL["jump"])
            z = 2.0 + 1.0j
            det = abs(np.linalg.det(asm(sys, n, z, cfg.quad).value) - 1.0)
            add(which, n, "det", f"{z:.1f}", det, TOL["det"])
            s = rhp_mod.symmetry_residual(sys, which, n, 1.0 + 2.0j, cfg.quad)
            add(which, n, "symmetry", "1+2j", s, TOL["symmetry"])

    fig, ax = plt.subplots(figsize=(7, 4))
    vals = [r[4] for r in rows]
    ax.semilogy(range(len(vals)), [max(v, 1e-18) for v in vals], "o")
    ax.semilogy(range(len(vals)), [r[5] for r in rows], "r--", label="tolerance")
    ax.set_xlabel("check #")
    ax.set_ylabel("residual")
    ax.legend()
    ax.set_title("matrix problem residuals")
    return {"columns": cols, "rows": rows}, fig, ok


def _suite_toda(cfg: RunConfig):
    V0 = Potential(tuple(cfg.coeffs))
    tol = TOL["ode"] if V0.D == 2 else TOL["ode_d4"]
    state_fn = toda_mod.numeric_state_fn(V0, cfg.quad)
    cols = ["n", "t", "equation", "residual", "tolerance", "ok"]
    rows = []
    ok = True
    for t in cfg.t:
        for n in range(cfg.n_max + 1):
            res = toda_mod.ode_residuals(state_fn, n, t)
            res.update(constraint_res(state_fn, n, t))
            for name, value in res.items():
                this_tol = TOL["constraint"] if name.startswith("c:") else tol
                good = value <= this_tol
                ok &= good
                rows.append((n, t, name, value, this_tol, good))

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.semilogy([r[0] for r in rows], [max(r[3], 1e-18) for r in rows], "o")
    ax.axhline(tol, color="r", linestyle="--")
    ax.set_xlabel("n")
    ax.set_ylabel("residual")
    ax.set_title("dynamical system residuals")
    return {"columns": cols, "rows": rows}, fig, ok


def constraint_res(state_fn, n, t):
    return {"c:" + k: v
            for k, v in toda_mod.constraint_checks(state_fn, n, t).items()}


def _suite_debruijn(cfg: RunConfig):
    V = Potential(tuple(cfg.coeffs), cfg.t[0])
    cols = ["n", "lhs", "rhs", "rel_gap", "tolerance", "ok"]
    rows = []
    ok = True
    for n in (1, 2):
        lhs, rhs, rel = debruijn_check(V, n, cfg.quad)
        good = rel <= TOL["debruijn"]
        ok &= good
        rows.append((n, lhs, rhs, rel, TOL["debruijn"], good))

    fig, ax = plt.subplots(figsize=(5, 4))
    idx = np.arange(len(rows))
    ax.bar(idx - 0.15, [r[1] for r in rows], width=0.3, label="pfaffian")
    ax.bar(idx + 0.15, [r[2] for r in rows], width=0.3, label="integral")
    ax.set_xticks(idx, [f"n={r[0]}" for r in rows])
    ax.legend()
    ax.set_title("pfaffian vs multiple integral")
    return {"columns": cols, "rows": rows}, fig, ok


SUITE_FNS = {
    "polys": _suite_polys,
    "kernel": _suite_kernel,
    "rhp": _suite_rhp,
    "toda": _suite_toda,
    "debruijn": _suite_debruijn,
}


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def run(cfg: RunConfig) -> int:
    os.makedirs(cfg.out_path, exist_ok=True)
    meta = {
        "potential": cfg.coeffs, "t": cfg.t, "n_max": cfg.n_max,
        "suites": list(cfg.suites), "format": cfg.out_format,
        "threads": thread_count(),
    }
    all_ok = True
    for name in cfg.suites:
        table, fig, ok = SUITE_FNS[name](cfg)
        table["meta"] = dict(meta, suite=name)
        ext = "csv" if cfg.out_format == "csv" else "json"
        emit(table, cfg.out_format, os.path.join(cfg.out_path, f"{name}.{ext}"))
        _save_figure(fig, os.path.join(cfg.out_path, f"{name}.png"))
        status = "pass" if ok else "FAIL"
        print(f"suite {name}: {status}")
        all_ok &= ok
    return 0 if all_ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="skewrh")
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="execute verification suites")
    runp.add_argument("--config", required=True, help="path to JSON config")
    runp.add_argument("--out", help="output directory (overrides config)")
    runp.add_argument("--format", choices=("csv", "json"),
                      help="table format (overrides config)")
    runp.add_argument("--suite", action="append", default=None,
                      help="suite to run (repeatable; overrides config)")
    args = parser.parse_args(argv)

    try:
        try:
            with open(args.config) as f:
                doc = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigInvalid(f"cannot read config: {e}")
        if args.out:
            doc["out_path"] = args.out
        if args.format:
            doc["out_format"] = args.format
        if args.suite:
            doc["suites"] = args.suite
        cfg = parse_config(doc)
    except ConfigInvalid as e:
        print(f"config error: {e}", file=_sys.stderr)
        return 2
    try:
        return run(cfg)
    except SkewrhError as e:
        print(f"run failed: {e}", file=_sys.stderr)
        return 1


if __name__ == "__main__":
    _sys.exit(main())
