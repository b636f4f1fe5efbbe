"""The beta = 4 pre-kernel: direct sum and matrix-factor evaluation.

Both routes are quadrature free.  The direct route sums the skew-normalised
P/Psi pairs; the factored route contracts the polynomial second column of
the dual matrix problem against the polynomial first column, divided by
x - y.  Near the diagonal the division is replaced by stable polynomial
divided differences (the numerator vanishes identically at x = y).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poly import Poly
from .quadrature import DEFAULT_CFG, QuadConfig, real_nodes, real_dot
from .rhp import dual_column, even_rows
from .skewcore import SkewSystem

# |x - y| below which the divided-difference form is used.
DIAG_BAND = 1e-4


@dataclass
class KernelEval:
    n: int
    x: float
    y: float
    direct: float
    cd: float

    @property
    def rel_gap(self) -> float:
        return abs(self.direct - self.cd) / max(abs(self.direct), 1e-300)


def prekernel_direct(sys: SkewSystem, n: int, x: float, y: float) -> float:
    """S_n(x,y) as the explicit skew-normalised sum.

    d/dy (P e^{-V}) = -gamma D Psi e^{-V} turns the derivative form into
      -(gamma D / 2) e^{-V(x)-V(y)} sum_k h_k^{-1}
          [P_{2k}(x) Psi_{2k+1}(y) - P_{2k+1}(x) Psi_{2k}(y)].
    """
    V = sys.V
    total = 0.0
    for k in range(n):
        total += (sys.p(2 * k)(x).real * sys.psi(2 * k + 1)(y).real
                  - sys.p(2 * k + 1)(x).real * sys.psi(2 * k)(y).real) / sys.h[k]
    env = np.exp(-(V(x) + V(y)).real)
    return -0.5 * V.gamma * V.D * env * total


def _divided_difference(p: Poly, x: float, y: float) -> complex:
    """(p(y) - p(x)) / (y - x), analytically continued to x = y."""
    if x == y:
        return p.deriv()(x)
    if len(p.coeffs) == 1:
        return 0.0 + 0.0j
    # synthetic division: q = (p - p(x)) / (z - x), then Horner at y
    q = np.empty(len(p.coeffs) - 1, dtype=complex)
    q[-1] = p.coeffs[-1]
    for k in range(len(p.coeffs) - 3, -1, -1):
        q[k] = p.coeffs[k + 1] + x * q[k + 1]
    out = 0.0 + 0.0j
    for c in q[::-1]:
        out = out * y + c
    return out


def prekernel_cd(sys: SkewSystem, n: int, x: float, y: float,
                 cfg: QuadConfig = DEFAULT_CFG) -> float:
    """S_n(x,y) = -(1/4 pi i) e^{-V(x)-V(y)} N(x,y)/(x-y) with
    N(x,y) = sum_k c_k(x) p_k(y), c_k the dual second-column polynomials and
    p_k the first-column row polynomials.  N(x,x) = 0 identically, so inside
    the diagonal band the ratio is summed as divided differences."""
    if n == 0:
        return 0.0
    V = sys.V
    cs = dual_column(sys, n)
    ps = even_rows(sys, n)
    env = np.exp(-(V(x) + V(y)).real)
    if abs(x - y) < DIAG_BAND:
        # N/(x-y) = -sum c_k(x) (p_k(y)-p_k(x))/(y-x), so the sign flips
        acc = 0.0 + 0.0j
        for c, p in zip(cs, ps):
            acc += c(x) * _divided_difference(p, x, y)
        val = env * acc / (4j * np.pi)
    else:
        acc = 0.0 + 0.0j
        for c, p in zip(cs, ps):
            acc += c(x) * p(y)
        val = -env * acc / (4j * np.pi * (x - y))
    return float(val.real)


def evaluate(sys: SkewSystem, n: int, x: float, y: float,
             cfg: QuadConfig = DEFAULT_CFG) -> KernelEval:
    return KernelEval(n=n, x=x, y=y,
                      direct=prekernel_direct(sys, n, x, y),
                      cd=prekernel_cd(sys, n, x, y, cfg))


def density_table(sys: SkewSystem, n: int, grid) -> list:
    """Rows (x, S_n(x,x)) along the grid, via the diagonal evaluation."""
    return [(float(x), prekernel_cd(sys, n, float(x), float(x)))
            for x in np.asarray(grid, dtype=float)]


def density_integral(sys: SkewSystem, n: int,
                     cfg: QuadConfig = DEFAULT_CFG) -> float:
    """int S_n(x,x) dx, which counts the quasi-particle pairs (equals n)."""
    V = sys.V
    x = real_nodes(V, cfg)
    total = np.zeros_like(x)
    for k in range(n):
        total += (np.asarray(sys.p(2 * k)(x + 0j)).real
                  * np.asarray(sys.psi(2 * k + 1)(x + 0j)).real
                  - np.asarray(sys.p(2 * k + 1)(x + 0j)).real
                  * np.asarray(sys.psi(2 * k)(x + 0j)).real) / sys.h[k]
    # e^{-2V} weight lives in real_dot; the direct-sum envelope is e^{-V-V}
    return -0.5 * V.gamma * V.D * real_dot(total, V, cfg)
