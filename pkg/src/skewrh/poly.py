"""Dense complex polynomials, polynomial potentials, and the dual map.

A ``Poly`` stores coefficients in ascending powers: ``coeffs[k]`` multiplies
``x**k``.  The dual map sends a monic ``P`` of degree ``n`` to the monic
polynomial of degree ``n + D - 1``

    psi = (V' P - P') / (gamma * D)

and ``undual`` inverts it by triangular coefficient matching.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotInImage

# Relative threshold below which trailing coefficients are trimmed.
TRIM_REL = 1e-13


class Poly:
    """Dense polynomial with complex coefficients in ascending powers."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        if c.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        self.coeffs = _trim(c)

    # -- basic structure ---------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs.any() else -1

    def coeff(self, k: int) -> complex:
        """Coefficient of x**k (0 beyond the stored degree)."""
        if k < 0 or k >= len(self.coeffs):
            return 0.0 + 0.0j
        return complex(self.coeffs[k])

    @property
    def is_monic(self) -> bool:
        d = self.degree
        return d >= 0 and abs(self.coeffs[d] - 1.0) < 1e-9

    def monic(self) -> "Poly":
        d = self.degree
        if d < 0:
            raise ValueError("zero polynomial cannot be made monic")
        return Poly(self.coeffs / self.coeffs[d])

    # -- algebra -----------------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        out = np.zeros(n, dtype=complex)
        out[: len(self.coeffs)] += self.coeffs
        out[: len(other.coeffs)] += other.coeffs
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(-self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        if np.isscalar(other):
            return Poly(self.coeffs * other)
        other = _as_poly(other)
        if self.degree < 0 or other.degree < 0:
            return Poly([0.0])
        return Poly(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> "Poly":
        """Multiply by x**k."""
        return Poly(np.concatenate([np.zeros(k, dtype=complex), self.coeffs]))

    def deriv(self) -> "Poly":
        if len(self.coeffs) <= 1:
            return Poly([0.0])
        return Poly(self.coeffs[1:] * np.arange(1, len(self.coeffs)))

    # -- evaluation --------------------------------------------------------

    def __call__(self, z):
        """Horner evaluation; accepts scalars or arrays."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z + c
        if out.ndim == 0:
            return complex(out)
        return out

    def real_part(self) -> "Poly":
        return Poly(self.coeffs.real.astype(complex))

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __repr__(self):
        return f"Poly({np.array2string(self.coeffs, precision=6)})"


def _trim(c: np.ndarray) -> np.ndarray:
    mx = np.max(np.abs(c)) if len(c) else 0.0
    if mx == 0.0:
        return np.zeros(1, dtype=complex)
    keep = len(c)
    while keep > 1 and abs(c[keep - 1]) <= TRIM_REL * mx:
        keep -= 1
    return np.array(c[:keep], dtype=complex)


def _as_poly(p) -> Poly:
    if isinstance(p, Poly):
        return p
    if np.isscalar(p):
        return Poly([p])
    return Poly(p)


ONE = Poly([1.0])
X = Poly([0.0, 1.0])


@dataclass(frozen=True)
class Potential:
    """V(x) = V0(x) + t*x with V0 of even degree D and positive leading coeff."""

    v0_coeffs: tuple = ()
    t: float = 0.0

    def __post_init__(self):
        c = tuple(float(v) for v in self.v0_coeffs)
        object.__setattr__(self, "v0_coeffs", c)
        d = len(c) - 1
        while d > 0 and c[d] == 0.0:
            d -= 1
        if d < 2 or d % 2 != 0:
            raise ValueError(f"potential degree must be even and >= 2, got {d}")
        if c[d] <= 0.0:
            raise ValueError("leading coefficient of the potential must be positive")

    @property
    def D(self) -> int:
        c = self.v0_coeffs
        d = len(c) - 1
        while d > 0 and c[d] == 0.0:
            d -= 1
        return d

    @property
    def gamma(self) -> float:
        return self.v0_coeffs[self.D]

    @property
    def coeffs(self) -> np.ndarray:
        """Full coefficient list of V(., t), ascending."""
        c = np.zeros(self.D + 1)
        c[: len(self.v0_coeffs)] = self.v0_coeffs
        c[1] += self.t
        return c

    def as_poly(self) -> Poly:
        return Poly(self.coeffs)

    def vprime(self) -> Poly:
        return self.as_poly().deriv()

    def __call__(self, z):
        return self.as_poly()(z)

    def with_t(self, t: float) -> "Potential":
        return Potential(self.v0_coeffs, t)

    def cache_key(self) -> tuple:
        return (self.v0_coeffs, self.t)


def dual_map(p: Poly, V: Potential) -> Poly:
    """Monic image of p under the dual map, degree deg(p) + D - 1."""
    gd = V.gamma * V.D
    return (V.vprime() * p - p.deriv()) * (1.0 / gd)


def undual(q: Poly, V: Potential) -> Poly:
    """Unique monic P with dual_map(P, V) = q, or NotInImage.

    Matches the top deg(q) - D + 2 coefficients of V'P - P' = gamma*D*q as a
    triangular system in the coefficients of P; the remaining D - 1 residual
    coefficients must vanish for q to be a dual image.
    """
    D, gd = V.D, V.gamma * V.D
    m = q.degree - D + 1
    if not q.is_monic or m < 0:
        raise NotInImage(f"degree {q.degree} input cannot be a dual image (D={D})")
    w = V.vprime().coeffs  # degree D-1, leading entry gd
    p = np.zeros(m + 1, dtype=complex)
    p[m] = 1.0
    for k in range(m - 1, -1, -1):
        # coefficient of x**(k + D - 1) in V'P - P' equals gd * q_{k+D-1}
        acc = 0.0 + 0.0j
        for j in range(D - 1):  # skip j = D-1, the unknown p[k] term
            idx = k + D - 1 - j
            if 0 <= idx <= m:
                acc += w[j] * p[idx]
        if k + D <= m:
            acc -= (k + D) * p[k + D]
        p[k] = (gd * q.coeff(k + D - 1) - acc) / gd
    cand = Poly(p)
    resid = dual_map(cand, V) - q
    if resid.max_abs_coeff() > 1e-8 * max(q.max_abs_coeff(), 1.0):
        raise NotInImage(
            f"residual {resid.max_abs_coeff():.3e} exceeds threshold; "
            "input is not the dual of any polynomial"
        )
    return cand
