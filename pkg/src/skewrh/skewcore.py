"""Skew-orthogonal systems of symplectic type for a polynomial potential.

For the skew-symmetric form <P,Q> = (1/2) int (P Q' - P' Q) e^{-2V} dx the
monic pairs (P_{2n}, P_{2n+1}) with positive skew-norms h_n are built
through their monic dual images Psi_m of degree m + D - 1: the duals are
characterised by orthogonality to low monomials plus the vanishing of the
D - 1 two-ray contour functionals, so each one is an explicit projection in
the basis of orthogonal polynomials H_k for e^{-2V}.  The same small matrix
M of ray functionals yields the resolvent-row polynomials R_n^{(j)}.

Also provided: the beta functionals, the recurrence ladder for
multiplication by x in the Psi and P bases, sign-change counting, and the
Pfaffian / multiple-integral consistency check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .errors import OutOfRange
from .linalg import pfaffian, solve
from .orthopoly import OrthogonalBasis, build_basis
from .poly import Poly, Potential, undual
from .quadrature import (DEFAULT_CFG, QuadConfig, WEIGHT_EXP_V, circle_moment,
                         composite_rule, gamma_integral, ray_truncation,
                         real_dot, real_nodes, real_rule, WEIGHT_EXP_2V)


@dataclass
class SkewSystem:
    """Immutable bundle of everything built for one potential and n range."""

    V: Potential
    n_max: int
    cfg: QuadConfig
    basis: OrthogonalBasis
    Psi: list = field(default_factory=list)   # Psi_0 .. Psi_{2 n_max + 1}
    P: list = field(default_factory=list)     # P_0 .. P_{2 n_max + 1}
    R: list = field(default_factory=list)     # R[n][j-1] = R_n^{(j)}, j = 1..D-1
    M: list = field(default_factory=list)     # per-n ray-functional matrix
    h: list = field(default_factory=list)     # h_0 .. h_{n_max}

    @property
    def D(self) -> int:
        return self.V.D

    def psi(self, m: int) -> Poly:
        self._check(m)
        return self.Psi[m]

    def p(self, m: int) -> Poly:
        self._check(m)
        return self.P[m]

    def r(self, n: int, j: int) -> Poly:
        """R_n^{(j)} for j = 1..D; R_n^{(D)} = -Psi_{2n} by the circle row."""
        if not (0 <= n <= self.n_max):
            raise OutOfRange(f"n = {n} outside 0..{self.n_max}")
        if j == self.D:
            return -self.Psi[2 * n]
        if not (1 <= j <= self.D - 1):
            raise OutOfRange(f"ray index {j} outside 1..{self.D}")
        return self.R[n][j - 1]

    def _check(self, m: int) -> None:
        if not (0 <= m <= 2 * self.n_max + 1):
            raise OutOfRange(f"index {m} outside 0..{2 * self.n_max + 1}")


def skew_product(p: Poly, q: Poly, V: Potential,
                 cfg: QuadConfig = DEFAULT_CFG) -> float:
    """<p,q> = (1/2) int (p q' - p' q) e^{-2V} dx; antisymmetric by construction."""
    integrand = p * q.deriv() - p.deriv() * q
    x = real_nodes(V, cfg)
    return 0.5 * real_dot(np.asarray(integrand(x + 0j)).real, V, cfg)


def beta(p: Poly, j: int, n_context: int, V: Potential,
         cfg: QuadConfig = DEFAULT_CFG) -> complex:
    """Linear functionals beta_1..beta_D.

    For j < D this is -(1/2 pi i) times the Gamma_j integral of p e^{-V};
    for j = D it is the circle functional with exponent 2*n_context + D,
    i.e. minus the coefficient of x^{2n+D-1} in p.
    """
    if not (1 <= j <= V.D):
        raise OutOfRange(f"beta index {j} outside 1..{V.D}")
    if j < V.D:
        return -gamma_integral(p, j, V, WEIGHT_EXP_V, cfg) / (2j * np.pi)
    return circle_moment(p, 2 * n_context + V.D)


def build_skew_system(V: Potential, n_max: int,
                      cfg: QuadConfig = DEFAULT_CFG) -> SkewSystem:
    """Construct Psi, P, R, M, h for n = 0..n_max."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    D = V.D
    basis = build_basis(V, 2 * n_max + D, cfg)

    # all two-ray functionals of the H basis needed below, cached in one table
    ray_H = np.empty((D - 1, 2 * n_max + D + 1), dtype=complex)
    for j in range(1, D):
        for m in range(2 * n_max + D + 1):
            ray_H[j - 1, m] = gamma_integral(basis.poly(m), j, V, WEIGHT_EXP_V, cfg)

    Psi, P, R, M, h = [], [], [], [], []
    for n in range(n_max + 1):
        # M_{jk} = int_{Gamma_j} H_{2n+k-1} e^{-V}, j,k = 1..D-1
        m_n = ray_H[:, 2 * n: 2 * n + D - 1].copy()
        M.append(m_n)

        def project(q: Poly, ray_vals: np.ndarray) -> Poly:
            # subtract the H_{2n}..H_{2n+D-2} combination matching the ray values
            c = solve(m_n, ray_vals[:, None])[:, 0]
            out = q
            for k in range(D - 1):
                out = out - c[k] * basis.poly(2 * n + k)
            return out

        top = basis.poly(2 * n + D - 1)
        psi_even = project(top, ray_H[:, 2 * n + D - 1].copy())

        lam = basis.next_to_leading(2 * n + D)
        odd_seed = basis.poly(2 * n + D) - lam * basis.poly(2 * n + D - 1)
        psi_odd = project(odd_seed,
                          ray_H[:, 2 * n + D] - lam * ray_H[:, 2 * n + D - 1])

        m_inv = solve(m_n, np.eye(D - 1, dtype=complex))
        r_n = []
        for j in range(1, D):
            r_j = Poly([0.0])
            for k in range(D - 1):
                r_j = r_j + (-2j * np.pi) * m_inv[k, j - 1] * basis.poly(2 * n + k)
            r_n.append(r_j)
        R.append(r_n)

        p_even = undual(psi_even, V).real_part()
        p_odd = undual(psi_odd, V).real_part()
        psi_even = psi_even.real_part()
        psi_odd = psi_odd.real_part()
        Psi.extend([psi_even, psi_odd])
        P.extend([p_even, p_odd])
        h.append(skew_product(p_even, p_odd, V, cfg))

    return SkewSystem(V=V, n_max=n_max, cfg=cfg, basis=basis,
                      Psi=Psi, P=P, R=R, M=M, h=h)


_SYSTEM_CACHE: dict = {}


def get_system(V: Potential, n_max: int, cfg: QuadConfig = DEFAULT_CFG) -> SkewSystem:
    """Memoized build_skew_system; an existing larger system is reused."""
    key = (V.cache_key(), cfg.cache_key())
    sys = _SYSTEM_CACHE.get(key)
    if sys is None or sys.n_max < n_max:
        sys = build_skew_system(V, n_max, cfg)
        _SYSTEM_CACHE[key] = sys
    return sys


# --------------------------------------------------------------------------
# recurrence ladder
# --------------------------------------------------------------------------

@dataclass
class RecurrenceLadder:
    """Coefficients of multiplication by x in the Psi and P bases.

    x Psi_{2k+1} = Psi_{2k+2} + a_k Psi_{2k+1} + b_k Psi_{2k} + c_k Psi_{2k-2}
                   + sum_j beta_j(x Psi_{2k+1}) R_k^{(j)}
    x Psi_{2k}   = Psi_{2k+1} + a~_k Psi_{2k}
                   + sum_j beta_j(x Psi_{2k}) R_k^{(j)}
    x P_{2k}   = P_{2k+1} + sum_m mu_{mk} P_{2m} + sum_{m<k} lambda_{mk} P_{2m+1}
    x P_{2k+1} = P_{2k+2} + sum_m mu~_{mk} P_{2m} + sum_m lambda~_{mk} P_{2m+1}

    eta/xi expand R_k^{(j)} - R_n^{(j)} over Psi_0..Psi_{2n-1}; both tables
    vanish for i <= k-1.
    """

    n: int
    eta: np.ndarray          # shape (n, n, D-1), eta[i, k, j-1]
    xi: np.ndarray
    a: np.ndarray            # shape (n,)
    b: np.ndarray
    c: np.ndarray
    a_tilde: np.ndarray
    mu: np.ndarray           # shape (n, n), mu[m, k]
    lam: np.ndarray
    mu_tilde: np.ndarray
    lam_tilde: np.ndarray
    beta_even: np.ndarray    # beta_j(x Psi_{2k}), shape (n, D-1)
    beta_odd: np.ndarray     # beta_j(x Psi_{2k+1})
    recon_residual: float    # worst coefficientwise residual of the two x-identities


def build_ladder(sys: SkewSystem, n: int) -> RecurrenceLadder:
    if not (1 <= n <= sys.n_max):
        raise OutOfRange(f"ladder needs 1 <= n <= n_max = {sys.n_max}")
    V, cfg, D = sys.V, sys.cfg, sys.D
    gd = V.gamma * V.D
    x = real_nodes(V, cfg)

    def dot(p: Poly, q: Poly) -> float:
        return real_dot(np.asarray((p * q)(x + 0j)).real, V, cfg)

    h = np.array(sys.h[:n])
    eta = np.zeros((n, n, D - 1), dtype=complex)
    xi = np.zeros((n, n, D - 1), dtype=complex)
    for k in range(n):
        for j in range(1, D):
            r = sys.r(k, j)
            for i in range(n):
                eta[i, k, j - 1] = (gd / h[i]) * complex(
                    real_dot(np.asarray((r * sys.p(2 * i + 1))(x + 0j)), V, cfg))
                xi[i, k, j - 1] = -(gd / h[i]) * complex(
                    real_dot(np.asarray((r * sys.p(2 * i))(x + 0j)), V, cfg))

    beta_even = np.zeros((n, D - 1), dtype=complex)
    beta_odd = np.zeros((n, D - 1), dtype=complex)
    for k in range(n):
        for j in range(1, D):
            beta_even[k, j - 1] = beta(sys.psi(2 * k).shift(), j, k, V, cfg)
            beta_odd[k, j - 1] = beta(sys.psi(2 * k + 1).shift(), j, k, V, cfg)

    a = np.zeros(n)
    b = np.zeros(n)
    c = np.zeros(n)
    a_tilde = np.zeros(n)
    for k in range(n):
        a[k] = (-(gd / h[k]) * dot(sys.p(2 * k).shift(), sys.psi(2 * k + 1))
                - np.sum(beta_odd[k] * xi[k, k]).real)
        b[k] = ((gd / h[k]) * dot(sys.psi(2 * k + 1).shift(), sys.p(2 * k + 1))
                - np.sum(beta_odd[k] * eta[k, k]).real)
        c[k] = -sys.h[k] / sys.h[k - 1] if k >= 1 else 0.0
        a_tilde[k] = ((gd / h[k]) * dot(sys.psi(2 * k).shift(), sys.p(2 * k + 1))
                      - np.sum(beta_even[k] * eta[k, k]).real)

    mu = np.zeros((n, n))
    lam = np.zeros((n, n))
    mu_tilde = np.zeros((n, n))
    lam_tilde = np.zeros((n, n))
    for k in range(n):
        for m in range(k + 1):
            mu[m, k] = -(gd / h[m]) * dot(sys.p(2 * k).shift(), sys.psi(2 * m + 1))
            mu_tilde[m, k] = -(gd / h[m]) * dot(sys.p(2 * k + 1).shift(),
                                                sys.psi(2 * m + 1))
            lam_tilde[m, k] = (gd / h[m]) * dot(sys.p(2 * k + 1).shift(),
                                                sys.psi(2 * m))
            if m < k:
                lam[m, k] = (gd / h[m]) * dot(sys.p(2 * k).shift(), sys.psi(2 * m))

    resid = 0.0
    for k in range(n):
        even = sys.psi(2 * k).shift() - sys.psi(2 * k + 1) \
            - a_tilde[k] * sys.psi(2 * k)
        odd = sys.psi(2 * k + 1).shift() - sys.psi(2 * k + 2) \
            - a[k] * sys.psi(2 * k + 1) - b[k] * sys.psi(2 * k)
        if k >= 1:
            odd = odd - c[k] * sys.psi(2 * k - 2)
        for j in range(1, D):
            even = even - beta_even[k, j - 1] * sys.r(k, j)
            odd = odd - beta_odd[k, j - 1] * sys.r(k, j)
        resid = max(resid, even.max_abs_coeff(), odd.max_abs_coeff())

    return RecurrenceLadder(n=n, eta=eta, xi=xi, a=a, b=b, c=c, a_tilde=a_tilde,
                            mu=mu, lam=lam, mu_tilde=mu_tilde,
                            lam_tilde=lam_tilde, beta_even=beta_even,
                            beta_odd=beta_odd, recon_residual=resid)


# --------------------------------------------------------------------------
# structural checks
# --------------------------------------------------------------------------

def count_sign_changes(p: Poly, window=(-10.0, 10.0)) -> int:
    """Sign changes of a real-coefficient p on a fine grid over the window."""
    a, b = window
    x = np.linspace(a, b, 20001)
    v = np.asarray(p(x + 0j)).real
    v = v[np.abs(v) > 1e-13 * max(1.0, np.max(np.abs(v)))]
    if len(v) < 2:
        return 0
    return int(np.sum(np.sign(v[:-1]) != np.sign(v[1:])))


def debruijn_check(V: Potential, n: int, cfg: QuadConfig = DEFAULT_CFG):
    """Pfaffian of the monomial skew-Gram vs the n-fold |Delta|^4 integral.

    With the 1/2-normalized skew product the identity reads
    pf(<x^{i-1}, x^{j-1}>)_{2n} = (1 / (2^n n!)) int_{R^n} prod |x_i - x_j|^4
    prod e^{-2V(x_k)} dx.  Returns (lhs, rhs, relative gap).
    """
    if n not in (1, 2):
        raise OutOfRange("multiple-integral check implemented for n = 1, 2 only")
    mono = [Poly([0.0] * k + [1.0]) for k in range(2 * n)]
    g = np.zeros((2 * n, 2 * n))
    for i in range(2 * n):
        for j in range(i + 1, 2 * n):
            g[i, j] = skew_product(mono[i], mono[j], V, cfg)
            g[j, i] = -g[i, j]
    lhs = pfaffian(g).real

    L = ray_truncation(V, 2.0, cfg)
    if n == 1:
        x, w, wv, _ = real_rule(V, WEIGHT_EXP_2V, cfg)
        rhs = float(np.sum(w * wv)) / 2.0
    else:
        x, w = composite_rule(-L, L, 200 // cfg.nodes_per_panel + 1,
                              cfg.nodes_per_panel)
        wv = w * np.exp(-2.0 * np.asarray(V(x)).real)
        diff4 = (x[:, None] - x[None, :]) ** 4
        rhs = float(wv @ diff4 @ wv) / (4.0 * factorial(2))
    rel = abs(lhs - rhs) / max(abs(rhs), 1e-300)
    return lhs, rhs, rel
