"""Assembly and verification of the even/odd matrix problems.

The even matrix A_n(z) is (D+1)x(D+1): each row is a polynomial followed by
its Cauchy transforms against e^{-2V} on the real line and e^{-V} on the
two-ray contours.  The odd matrix B_n(z) is (D+2)x(D+2) and appends the unit
circle column with weight x^{-2n-D}, computed by exact residue algebra.
The dual matrix is the inverse transpose; its second column consists of
known polynomials, which is what makes the kernel evaluation contour-free.

Expansion data G1, G2 (and the dual-side A1, A2) are extracted from moments
alone, no Cauchy evaluation involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange, PointNearIntersection, PointOnContour
from .linalg import solve
from .poly import Poly, Potential
from .quadrature import (Contour, DEFAULT_CFG, QuadConfig, WEIGHT_EXP_V,
                         WEIGHT_EXP_2V, cauchy_transform, circle_cauchy_xpow,
                         gamma_integral, omega, real_dot, real_nodes)
from .skewcore import SkewSystem

EVEN_A = "even"
EVEN_AHAT = "even-dual"
ODD_B = "odd"
ODD_BHAT = "odd-dual"


@dataclass
class RhpMatrix:
    which: str
    n: int
    z: complex
    value: np.ndarray
    t: float = 0.0


# --------------------------------------------------------------------------
# row polynomials
# --------------------------------------------------------------------------

def even_rows(sys: SkewSystem, n: int) -> list:
    """Row polynomials of A_n: [Psi_{2n}, -(2 pi i gamma D / h_{n-1}) Psi_{2n-2},
    R_n^{(1)}, ..., R_n^{(D-1)}].  Defined for n >= 1."""
    if n < 1:
        raise OutOfRange("the second row needs n >= 1")
    V = sys.V
    scale = -2j * np.pi * V.gamma * V.D / sys.h[n - 1]
    rows = [sys.psi(2 * n), scale * sys.psi(2 * n - 2)]
    rows += [sys.r(n, j) for j in range(1, V.D)]
    return rows


def odd_rows(sys: SkewSystem, n: int) -> list:
    """Row polynomials of B_n: as the even case with Psi_{2n+1} on top and
    R_n^{(D)} = -Psi_{2n} appended for the circle row."""
    rows = even_rows(sys, n)
    rows[0] = sys.psi(2 * n + 1)
    rows.append(sys.r(n, sys.D))
    return rows


def dual_column(sys: SkewSystem, n: int) -> list:
    """Second column of the dual (inverse-transpose) even matrix, all
    polynomials: [-(2 pi i gamma D / h_{n-1}) P_{2n-2}, P_{2n}, then for
    i >= 3 the explicit P-basis sums]."""
    if n < 1:
        raise OutOfRange("the dual column needs n >= 1")
    V, cfg, D = sys.V, sys.cfg, sys.D
    gd = V.gamma * V.D
    col = [(-2j * np.pi * gd / sys.h[n - 1]) * sys.p(2 * n - 2), sys.p(2 * n)]
    for i in range(3, D + 2):
        entry = Poly([0.0])
        for k in range(n):
            w_odd = gamma_integral(sys.psi(2 * k + 1).shift(), i - 2, V,
                                   WEIGHT_EXP_V, cfg)
            w_even = gamma_integral(sys.psi(2 * k).shift(), i - 2, V,
                                    WEIGHT_EXP_V, cfg)
            entry = entry + (gd / sys.h[k]) * (w_odd * sys.p(2 * k)
                                               - w_even * sys.p(2 * k + 1))
        col.append(entry)
    return col


# --------------------------------------------------------------------------
# matrix assembly
# --------------------------------------------------------------------------

def _assemble(sys: SkewSystem, rows: list, n: int, z: complex, odd: bool,
              cfg: QuadConfig) -> np.ndarray:
    V, D = sys.V, sys.D
    dim = len(rows)
    z = complex(z)
    out = np.empty((dim, dim), dtype=complex)
    out[:, 0] = [p(z) for p in rows]
    out[:, 1] = cauchy_transform(rows, Contour("real", D), WEIGHT_EXP_2V, z,
                                 cfg, V)
    for j in range(1, D):
        out[:, j + 1] = cauchy_transform(rows, Contour("gamma", D, j),
                                         WEIGHT_EXP_V, z, cfg, V)
    if odd:
        m = 2 * n + D
        if abs(abs(z) - 1.0) < 1e-8:
            raise PointOnContour(f"|z| = {abs(z):.10f} is on the unit circle")
        out[:, D + 1] = [circle_cauchy_xpow(p, m, z) for p in rows]
    return out


def assemble_even(sys: SkewSystem, n: int, z: complex,
                  cfg: QuadConfig = DEFAULT_CFG) -> RhpMatrix:
    value = _assemble(sys, even_rows(sys, n), n, z, False, cfg)
    return RhpMatrix(EVEN_A, n, complex(z), value, sys.V.t)


def assemble_odd(sys: SkewSystem, n: int, z: complex,
                 cfg: QuadConfig = DEFAULT_CFG) -> RhpMatrix:
    value = _assemble(sys, odd_rows(sys, n), n, z, True, cfg)
    return RhpMatrix(ODD_B, n, complex(z), value, sys.V.t)


def assemble_even_dual(sys: SkewSystem, n: int, z: complex,
                       cfg: QuadConfig = DEFAULT_CFG) -> RhpMatrix:
    """Inverse transpose of A_n(z), with column 2 replaced by the direct
    polynomial formulas (the two agree; tests quantify how well)."""
    a = assemble_even(sys, n, z, cfg)
    value = solve(a.value, np.eye(sys.D + 1, dtype=complex)).T
    value[:, 1] = [p(complex(z)) for p in dual_column(sys, n)]
    return RhpMatrix(EVEN_AHAT, n, complex(z), value, sys.V.t)


# --------------------------------------------------------------------------
# jump and symmetry checks
# --------------------------------------------------------------------------

def _classify_point(x: complex, D: int, odd: bool):
    """Memberships (chi_R, chi_{Gamma_1..D-1}, chi_T) and the unit tangent
    of travel at x.  The positive axis is shared by the real line and every
    two-ray contour; the negative axis belongs to the real line only."""
    rot = omega(D)
    on_circle = odd and abs(abs(x) - 1.0) < 1e-9
    chi_r = False
    chi_g = [False] * (D - 1)
    if on_circle:
        return chi_r, chi_g, True, 1j * x / abs(x)
    if abs(x.imag) < 1e-9 * max(1.0, abs(x)) and x.real > 0:
        chi_r = True
        chi_g = [True] * (D - 1)
        return chi_r, chi_g, False, 1.0 + 0.0j
    if abs(x.imag) < 1e-9 * max(1.0, abs(x)) and x.real < 0:
        chi_r = True
        chi_g[D // 2 - 1] = True
        return chi_r, chi_g, False, 1.0 + 0.0j
    for k in range(1, D):
        dirk = rot ** k
        u = x * np.conj(dirk)
        if u.real > 0 and abs(u.imag) < 1e-9 * abs(u):
            chi_g[k - 1] = True
            return chi_r, chi_g, False, -dirk  # rotated rays run toward 0
    raise PointOnContour(f"x = {x} does not lie on any contour component")


def jump_matrix(V: Potential, x: complex, n: int, odd: bool) -> np.ndarray:
    D = V.D
    chi_r, chi_g, chi_t, _ = _classify_point(x, D, odd)
    dim = D + 2 if odd else D + 1
    j = np.eye(dim, dtype=complex)
    if chi_r:
        j[0, 1] = np.exp(-2.0 * V(x))
    for k in range(1, D):
        if chi_g[k - 1]:
            j[0, k + 1] = np.exp(-V(x))
    if odd and chi_t:
        j[0, D + 1] = x ** (-2 * n - D)
    return j


def jump_residual(sys: SkewSystem, which: str, n: int, x: complex,
                  cfg: QuadConfig = DEFAULT_CFG) -> float:
    """Relative residual of A+(x) = A-(x) J(x) at a contour point x.

    Boundary values are taken by two-point Richardson extrapolation along
    the left/right normals (offsets 1e-4 and 1e-5).
    """
    odd = which in (ODD_B, ODD_BHAT)
    x = complex(x)
    intersections = [0.0 + 0.0j]
    if odd:
        intersections += [omega(sys.D) ** k for k in range(sys.D)]
        intersections += [-1.0 + 0.0j]
    if min(abs(x - s) for s in intersections) < 1e-3:
        raise PointNearIntersection(f"x = {x} is within 1e-3 of an intersection")

    _, _, _, tau = _classify_point(x, sys.D, odd)
    nu = 1j * tau  # left normal of the travel direction
    assemble = assemble_odd if odd else assemble_even

    def boundary(side: float) -> np.ndarray:
        a_coarse = assemble(sys, n, x + side * 1e-4 * nu, cfg).value
        a_fine = assemble(sys, n, x + side * 1e-5 * nu, cfg).value
        return (10.0 * a_fine - a_coarse) / 9.0

    plus = boundary(+1.0)
    minus = boundary(-1.0)
    j = jump_matrix(sys.V, x, n, odd)
    num = np.max(np.abs(plus - minus @ j))
    return float(num / max(np.max(np.abs(minus)), 1e-300))


def symmetry_matrix(D: int, odd: bool) -> np.ndarray:
    """Signed permutation Q with A(z) = Q conj(A(conj(z))) Q; conjugation
    swaps the ray columns k <-> D-k."""
    dim = D + 2 if odd else D + 1
    q = np.zeros((dim, dim))
    q[0, 0] = -1.0
    q[1, 1] = 1.0
    for k in range(1, D):
        q[k + 1, D - k + 1] = 1.0
    if odd:
        q[D + 1, D + 1] = -1.0
    return q


def symmetry_residual(sys: SkewSystem, which: str, n: int, z: complex,
                      cfg: QuadConfig = DEFAULT_CFG) -> float:
    odd = which in (ODD_B, ODD_BHAT)
    assemble = assemble_odd if odd else assemble_even
    a = assemble(sys, n, z, cfg).value
    b = assemble(sys, n, np.conj(complex(z)), cfg).value
    q = symmetry_matrix(sys.D, odd)
    resid = a - q @ np.conj(b) @ q
    return float(np.max(np.abs(resid)) / max(np.max(np.abs(a)), 1e-300))


# --------------------------------------------------------------------------
# asymptotic expansion data
# --------------------------------------------------------------------------

@dataclass
class ExpansionData:
    n: int
    t: float
    G1: np.ndarray
    G2: np.ndarray
    A1: np.ndarray
    A2: np.ndarray


def expansion(sys: SkewSystem, n: int,
              cfg: QuadConfig = DEFAULT_CFG) -> ExpansionData:
    """G1, G2 of A_n(z) = (I + G1/z + G2/z^2 + ...) Lambda(z), from
    polynomial coefficients (column 1), real moments (column 2) and ray
    moments (columns >= 3); then A1 = -G1^T and A2 = (G1 G1 - G2)^T for the
    dual side.

    n = 0 is supported through the degenerate reading row 2 = e_2 (P_0 = 1),
    which zeroes row 2 of G1 and G2.
    """
    V, D = sys.V, sys.D
    if n >= 1:
        rows = even_rows(sys, n)
    else:
        rows = [sys.psi(0), Poly([0.0])] + [sys.r(0, j) for j in range(1, D)]
    dim = D + 1
    x = real_nodes(V, cfg)
    g1 = np.zeros((dim, dim), dtype=complex)
    g2 = np.zeros((dim, dim), dtype=complex)
    for i, p in enumerate(rows):
        if p.degree < 0:
            continue  # degenerate row 2 at n = 0
        g1[i, 0] = p.coeff(2 * n + D - 2)
        g2[i, 0] = p.coeff(2 * n + D - 3)
        vals = np.asarray(p(x + 0j))
        g1[i, 1] = -real_dot(vals * x ** (2 * n), V, cfg) / (2j * np.pi)
        g2[i, 1] = -real_dot(vals * x ** (2 * n + 1), V, cfg) / (2j * np.pi)
        for j in range(1, D):
            g1[i, j + 1] = -gamma_integral(p.shift(1), j, V, WEIGHT_EXP_V,
                                           cfg) / (2j * np.pi)
            g2[i, j + 1] = -gamma_integral(p.shift(2), j, V, WEIGHT_EXP_V,
                                           cfg) / (2j * np.pi)
    a1 = -g1.T
    a2 = (g1 @ g1 - g2).T
    return ExpansionData(n=n, t=V.t, G1=g1, G2=g2, A1=a1, A2=a2)


def recurrence_factor(exp_n: ExpansionData, exp_n1: ExpansionData):
    """Lax-step factors rho1, rho2 and kappa from consecutive expansions."""
    dim = exp_n.A1.shape[0]
    e1 = np.zeros((dim, dim))
    e2 = np.zeros((dim, dim))
    e1[0, 0] = 1.0
    e2[1, 1] = 1.0
    sigma = e1 - e2
    a1n, a2n = exp_n.A1, exp_n.A2
    a1m, a2m = exp_n1.A1, exp_n1.A2
    rho1 = a1m @ e2 - e2 @ a1n
    rho2 = (np.eye(dim) - e1 - e2 + a2m @ e2 + e2 @ (a1n @ a1n - a2n)
            - a1m @ e2 @ a1n)
    kappa = a1n @ sigma - sigma @ a1n
    return rho1, rho2, kappa


def recurrence_residual(sys: SkewSystem, n: int, z: complex,
                        cfg: QuadConfig = DEFAULT_CFG) -> float:
    """Relative residual of dual_{n+1}(z) = (z^2 E2 + z rho1 + rho2) dual_n(z)."""
    rho1, rho2, _ = recurrence_factor(expansion(sys, n, cfg),
                                      expansion(sys, n + 1, cfg))
    dim = sys.D + 1
    e2 = np.zeros((dim, dim))
    e2[1, 1] = 1.0
    z = complex(z)
    lhs = assemble_even_dual(sys, n + 1, z, cfg).value
    rhs = (z * z * e2 + z * rho1 + rho2) @ assemble_even_dual(sys, n, z, cfg).value
    return float(np.max(np.abs(lhs - rhs)) / max(np.max(np.abs(lhs)), 1e-300))
