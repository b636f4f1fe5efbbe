"""Contours, weighted integrals, moments, and Cauchy transforms.

The integration geometry is a star of rays C_k = e^{2 pi i k/D}[0, oo),
k = 0..D-1, with C_0 outgoing and the rotated rays oriented toward the
origin; the two-ray contour Gamma_k = C_0 u C_k (so Gamma_{D/2} is the real
line, left to right), plus the positively oriented unit circle.

Weighted integrals against e^{-V} / e^{-2V} are done with composite
Gauss-Legendre rules on truncated rays, panel counts doubled until two
successive estimates agree to the configured relative tolerance.  Cauchy
transforms use a locally adaptive dyadic splitter so evaluation points close
to the contour stay accurate.  Circle integrals of x^{-m} * p are done by
exact coefficient algebra, never quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NoConvergence, PointOnContour
from .poly import Poly, Potential

WEIGHT_EXP_V = "exp-V"
WEIGHT_EXP_2V = "exp-2V"

_WEIGHT_SCALE = {WEIGHT_EXP_V: 1.0, WEIGHT_EXP_2V: 2.0}


@dataclass(frozen=True)
class QuadConfig:
    nodes_per_panel: int = 32
    rel_tol: float = 1e-12
    truncation_drop: float = 1e-18
    max_depth: int = 42

    def __post_init__(self):
        if self.nodes_per_panel <= 0 or self.rel_tol <= 0 or self.truncation_drop <= 0:
            raise ValueError("quadrature configuration values must be positive")

    def cache_key(self) -> tuple:
        return (self.nodes_per_panel, self.rel_tol, self.truncation_drop, self.max_depth)


DEFAULT_CFG = QuadConfig()


@dataclass(frozen=True)
class Contour:
    """One component of the integration geometry."""

    kind: str  # "real" | "gamma" | "circle"
    D: int = 2
    k: int = 0  # ray index for kind == "gamma"

    def __post_init__(self):
        if self.kind not in ("real", "gamma", "circle"):
            raise ValueError(f"unknown contour kind {self.kind!r}")
        if self.kind == "gamma" and not (1 <= self.k <= self.D - 1):
            raise ValueError(f"gamma index {self.k} out of range for D={self.D}")


def omega(D: int) -> complex:
    return np.exp(2j * np.pi / D)


@lru_cache(maxsize=None)
def _leggauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def composite_rule(a: float, b: float, npanels: int, order: int):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b]."""
    xg, wg = _leggauss(order)
    edges = np.linspace(a, b, npanels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel()
    return x, w


def ray_truncation(V: Potential, weight_scale: float, cfg: QuadConfig,
                   deg_hint: int = 34) -> float:
    """Length beyond which e^{-weight_scale*V} kills any desk-scale polynomial.

    Conservative bound shared by every ray: only the leading gamma*s^D term
    helps, every lower-order coefficient is assumed to fight it.
    """
    c = V.coeffs
    D = V.D
    target = np.log(1.0 / cfg.truncation_drop)

    def margin(s: float) -> float:
        decay = V.gamma * s ** D - sum(abs(c[j]) * s ** j for j in range(1, D))
        return weight_scale * decay - deg_hint * np.log1p(s) - target

    s = 1.0
    # require the margin to hold at s and two growth steps beyond it
    while not (margin(s) >= 0 and margin(1.25 * s) >= 0 and margin(1.6 * s) >= 0):
        s *= 1.25
        if s > 1e6:
            raise NoConvergence("could not find a truncation length for the potential")
    return s


# --------------------------------------------------------------------------
# cached fixed rules (moments / inner products)
# --------------------------------------------------------------------------

_RULE_CACHE: dict = {}


def _converged_panels(probe, a: float, b: float, cfg: QuadConfig) -> int:
    npanels = 16
    prev = None
    while npanels <= 4096:
        x, w = composite_rule(a, b, npanels, cfg.nodes_per_panel)
        val = float(np.sum(w * probe(x)))
        if prev is not None and abs(val - prev) <= cfg.rel_tol * max(abs(val), 1e-300):
            return npanels
        prev = val
        npanels *= 2
    raise NoConvergence("fixed rule did not converge while doubling panels")


def real_rule(V: Potential, weight: str, cfg: QuadConfig = DEFAULT_CFG):
    """Nodes, plain weights, and weight values e^{-s*V} on the truncated real line."""
    key = (V.cache_key(), weight, cfg.cache_key(), "real")
    if key not in _RULE_CACHE:
        ws = _WEIGHT_SCALE[weight]
        L = ray_truncation(V, ws, cfg)

        def probe(x):
            return (1.0 + x ** 30) * np.exp(-ws * V(x).real)

        npanels = _converged_panels(probe, -L, L, cfg)
        x, w = composite_rule(-L, L, 2 * npanels, cfg.nodes_per_panel)
        wv = np.exp(-ws * np.asarray(V(x)).real)
        _RULE_CACHE[key] = (x, w, wv, L)
    return _RULE_CACHE[key]


def ray_rule(V: Potential, k: int, weight: str, cfg: QuadConfig = DEFAULT_CFG):
    """Rule for Gamma_k = C_0 u C_k: nodes s on [0, L], plain weights, and the
    weight values on the outgoing ray and on the rotated ray."""
    key = (V.cache_key(), weight, cfg.cache_key(), "ray", k)
    if key not in _RULE_CACHE:
        ws = _WEIGHT_SCALE[weight]
        D = V.D
        L = ray_truncation(V, ws, cfg)
        rot = omega(D) ** k

        def probe(s):
            return (1.0 + s ** 30) * (
                np.exp(-ws * np.asarray(V(s)).real)
                + np.abs(np.exp(-ws * np.asarray(V(rot * s))))
            )

        npanels = _converged_panels(probe, 0.0, L, cfg)
        s, w = composite_rule(0.0, L, 2 * npanels, cfg.nodes_per_panel)
        w_out = np.exp(-ws * np.asarray(V(s + 0j)))
        w_rot = np.exp(-ws * np.asarray(V(rot * s)))
        _RULE_CACHE[key] = (s, w, w_out, w_rot, L, rot)
    return _RULE_CACHE[key]


# --------------------------------------------------------------------------
# weighted integrals
# --------------------------------------------------------------------------

def gamma_integral(p: Poly, k: int, V: Potential, weight: str = WEIGHT_EXP_V,
                   cfg: QuadConfig = DEFAULT_CFG) -> complex:
    """Integral of p * weight over Gamma_k with the documented orientations.

    Equals int_0^oo [g(s) - rot * g(rot*s)] ds for g = p * weight and
    rot = e^{2 pi i k / D}; for k = D/2 this is the real-line integral.
    """
    if not (1 <= k <= V.D - 1):
        raise ValueError(f"gamma index {k} out of range for D={V.D}")
    s, w, w_out, w_rot, _, rot = ray_rule(V, k, weight, cfg)
    vals = p(s + 0j) * w_out - rot * p(rot * s) * w_rot
    return complex(np.sum(w * vals))


def real_moment(p: Poly, j: int, V: Potential, cfg: QuadConfig = DEFAULT_CFG) -> float:
    """int_R x^j p(x) e^{-2V(x)} dx over the truncated symmetric interval."""
    if j < 0:
        raise ValueError("moment order must be nonnegative")
    x, w, wv, _ = real_rule(V, WEIGHT_EXP_2V, cfg)
    vals = np.asarray(p(x + 0j)).real * x ** j
    return float(np.sum(w * wv * vals))


def real_dot(values: np.ndarray, V: Potential, cfg: QuadConfig = DEFAULT_CFG):
    """Weighted sum of integrand values sampled on the cached e^{-2V} grid."""
    x, w, wv, _ = real_rule(V, WEIGHT_EXP_2V, cfg)
    total = np.sum(w * wv * values)
    return complex(total) if np.iscomplexobj(values) else float(total)


def real_nodes(V: Potential, cfg: QuadConfig = DEFAULT_CFG) -> np.ndarray:
    return real_rule(V, WEIGHT_EXP_2V, cfg)[0]


def circle_moment(p: Poly, m: int) -> complex:
    """-(1/2 pi i) * contour integral of p(z) z^{-m} over the unit circle.

    Purely analytic: minus the coefficient of x^{m-1} in p.
    """
    if m < 1:
        raise ValueError("circle moment order must be >= 1")
    return -p.coeff(m - 1)


# --------------------------------------------------------------------------
# adaptive quadrature (Cauchy transforms)
# --------------------------------------------------------------------------

def _adaptive_vec(f, a: float, b: float, cfg: QuadConfig) -> np.ndarray:
    """Adaptive dyadic panels, vector integrand f: (npts,) -> (nfun, npts)."""
    order = cfg.nodes_per_panel

    def panel(lo, hi):
        x, w = composite_rule(lo, hi, 1, order)
        return f(x) @ w

    x0, w0 = composite_rule(a, b, 1, order)
    f0 = f(x0)
    whole = f0 @ w0
    scale = max(float(np.max(np.abs(f0) @ w0)), 1e-300)

    total = np.zeros_like(whole)
    stack = [(a, b, whole, 0)]
    while stack:
        lo, hi, est, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = panel(lo, mid)
        right = panel(mid, hi)
        if np.max(np.abs(left + right - est)) <= cfg.rel_tol * scale:
            total = total + left + right
        elif depth >= cfg.max_depth:
            raise NoConvergence(
                f"adaptive quadrature hit max depth {cfg.max_depth} on "
                f"[{lo:.3e}, {hi:.3e}]"
            )
        else:
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    return total


def _dist_to_segment(z: complex, direction: complex, L: float) -> float:
    """Distance from z to the segment direction*[0, L] (|direction| = 1)."""
    u = z * np.conj(direction)
    t = min(max(u.real, 0.0), L)
    return abs(u - t)


def contour_distance(z: complex, c: Contour, V: Potential | None = None,
                     cfg: QuadConfig = DEFAULT_CFG) -> float:
    if c.kind == "circle":
        return abs(abs(z) - 1.0)
    L = ray_truncation(V, _WEIGHT_SCALE[WEIGHT_EXP_V], cfg) if V is not None else np.inf
    if c.kind == "real":
        return abs(z.imag) if abs(z.real) <= L else min(abs(z - L), abs(z + L))
    rot = omega(c.D) ** c.k
    return min(_dist_to_segment(z, 1.0 + 0j, L), _dist_to_segment(z, rot, L))


def cauchy_transform(p, c: Contour, weight: str, z: complex,
                     cfg: QuadConfig = DEFAULT_CFG, V: Potential | None = None):
    """(1/2 pi i) int_c p(x) w(x) / (x - z) dx.

    ``p`` may be a single Poly or a list of Polys (evaluated in one pass).
    For the circle the weight is ("xpow", m), i.e. w = x^{-m}, handled by
    exact residue algebra.
    """
    single = isinstance(p, Poly)
    polys = [p] if single else list(p)
    z = complex(z)

    if c.kind == "circle":
        if not (isinstance(weight, tuple) and weight[0] == "xpow"):
            raise ValueError("circle Cauchy transforms support only x^{-m} weights")
        m = weight[1]
        if abs(abs(z) - 1.0) < 1e-8:
            raise PointOnContour(f"|z| = {abs(z):.10f} is on the unit circle")
        out = [circle_cauchy_xpow(q, m, z) for q in polys]
        return out[0] if single else np.array(out)

    if V is None:
        raise ValueError("real/gamma Cauchy transforms need the potential")
    if contour_distance(z, c, V, cfg) < 1e-8:
        raise PointOnContour(f"z = {z} is within 1e-8 of the contour")
    ws = _WEIGHT_SCALE[weight]

    if c.kind == "real":
        L = real_rule(V, weight, cfg)[3]

        def f(x):
            xx = x + 0j
            common = np.exp(-ws * np.asarray(V(xx))) / (xx - z)
            return np.array([q(xx) * common for q in polys])

        total = _adaptive_vec(f, -L, L, cfg)
    else:
        L = ray_rule(V, c.k, weight, cfg)[4]
        rot = omega(c.D) ** c.k

        def f(s):
            s_out = s + 0j
            s_rot = rot * s
            out_part = np.exp(-ws * np.asarray(V(s_out))) / (s_out - z)
            rot_part = np.exp(-ws * np.asarray(V(s_rot))) / (s_rot - z)
            return np.array([q(s_out) * out_part - rot * q(s_rot) * rot_part
                             for q in polys])

        total = _adaptive_vec(f, 0.0, L, cfg)

    total = total / (2j * np.pi)
    return complex(total[0]) if single else total


def circle_cauchy_xpow(p: Poly, m: int, z: complex) -> complex:
    """C_T(x^{-m} p)(z) by residues: the pole at 0 always contributes, the
    pole at z only when |z| < 1."""
    inside = -sum(p.coeff(j) * z ** (j - m) for j in range(min(m, p.degree + 1)))
    if abs(z) < 1.0:
        return p(z) * z ** (-m) + inside
    return inside
