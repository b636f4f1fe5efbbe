"""Monic orthogonal polynomials for the weight e^{-2V} on the real line.

Built by the Stieltjes three-term recurrence evaluated on the cached
composite Gauss-Legendre grid, keeping both the coefficient vectors and the
grid values so downstream inner products are plain weighted dot products.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConditioningFailure, OutOfRange
from .poly import ONE, Poly, Potential, X
from .quadrature import DEFAULT_CFG, QuadConfig, real_rule, WEIGHT_EXP_2V

# Stop trusting the recurrence once the squared-norm ratio between
# consecutive degrees collapses this far; by then the grid products have
# lost essentially all significant digits.
NORM_COLLAPSE = 1e-250


@dataclass
class OrthogonalBasis:
    """Monic H_0..H_{n}, squared norms nu_k, and recurrence coefficients.

    The recurrence is H_{k+1} = (x - a_k) H_k - b_k H_{k-1} with b_0 = 0.
    """

    V: Potential
    H: list = field(default_factory=list)
    nu: np.ndarray = field(default_factory=lambda: np.zeros(0))
    rec_a: np.ndarray = field(default_factory=lambda: np.zeros(0))
    rec_b: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def max_index(self) -> int:
        return len(self.H) - 1

    def poly(self, k: int) -> Poly:
        if not (0 <= k <= self.max_index):
            raise OutOfRange(f"basis holds degrees 0..{self.max_index}, asked for {k}")
        return self.H[k]

    def norm(self, k: int) -> float:
        if not (0 <= k <= self.max_index):
            raise OutOfRange(f"basis holds degrees 0..{self.max_index}, asked for {k}")
        return float(self.nu[k])

    def next_to_leading(self, k: int) -> float:
        """Coefficient of x^{k-1} in H_k (zero for an even potential)."""
        return self.poly(k).coeff(k - 1).real


def build_basis(V: Potential, max_index: int,
                cfg: QuadConfig = DEFAULT_CFG) -> OrthogonalBasis:
    """Stieltjes construction of H_0..H_{max_index} for the weight e^{-2V}."""
    if max_index < 0:
        raise ValueError("max_index must be nonnegative")
    x, w, wv, _ = real_rule(V, WEIGHT_EXP_2V, cfg)
    wt = w * wv

    H = [ONE]
    vals_prev = np.zeros_like(x)
    vals_cur = np.ones_like(x)
    nu = [float(np.sum(wt))]
    rec_a, rec_b = [], []

    for k in range(max_index):
        if not np.isfinite(nu[k]) or nu[k] <= 0:
            raise ConditioningFailure(
                f"squared norm nu_{k} = {nu[k]:.3e} is not positive; "
                "the grid inner products have degenerated"
            )
        if nu[k] / nu[0] < NORM_COLLAPSE:
            raise ConditioningFailure(
                f"norm ratio nu_{k}/nu_0 = {nu[k] / nu[0]:.3e} collapsed; "
                "recurrence no longer trustworthy at this degree"
            )
        a_k = float(np.sum(wt * x * vals_cur ** 2) / nu[k])
        b_k = 0.0 if k == 0 else nu[k] / nu[k - 1]
        H_next = (X - a_k) * H[k] - b_k * (H[k - 1] if k else ONE)
        vals_next = (x - a_k) * vals_cur - b_k * vals_prev
        nu.append(float(np.sum(wt * vals_next ** 2)))
        rec_a.append(a_k)
        rec_b.append(b_k)
        H.append(H_next)
        vals_prev, vals_cur = vals_cur, vals_next

    return OrthogonalBasis(V=V, H=H, nu=np.array(nu),
                           rec_a=np.array(rec_a), rec_b=np.array(rec_b))


def hermite_monic(n: int) -> Poly:
    """Monic Hermite polynomial for the weight e^{-x^2} (reference oracle)."""
    h_prev, h_cur = ONE, X
    if n == 0:
        return ONE
    for k in range(1, n):
        h_prev, h_cur = h_cur, X * h_cur - (k / 2.0) * h_prev
    return h_cur
