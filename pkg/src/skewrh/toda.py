"""The first-order dynamical system satisfied by the expansion variables.

The deformed potential is V(z,t) = V0(z) + t z.  The dynamical variables
are entries of the 1/z and 1/z^2 expansion matrices of the dual matrix
problem, plus b_i = sum_k a1_{2k} a1_{ki}.  Every equation of the system is
checked by Richardson-extrapolated central differences in t; the constraint
and deduction identities are checked pointwise.  For D = 2, V0 = z^2/2 the
closed-form solution is available as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DenominatorVanishing, OutOfRange
from .poly import Potential
from .quadrature import DEFAULT_CFG, QuadConfig
from .rhp import ExpansionData, expansion
from .skewcore import get_system


@dataclass
class TodaState:
    """Dynamical variables at one (n, t); index i runs over 3..D+1."""

    n: int
    t: float
    D: int
    a1_22: float
    a2_22: float
    a2_12: complex
    a2_21: complex
    a1_2i: np.ndarray
    a1_i2: np.ndarray
    a2_i2: np.ndarray
    b_i: np.ndarray
    a1_1i: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    a1_i1: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))


def state_from_expansion(exp: ExpansionData, D: int) -> TodaState:
    a1, a2 = exp.A1, exp.A2
    a1_ii = a1[2:, 2:]
    a1_2i = a1[1, 2:]
    b_i = a1_2i @ a1_ii
    return TodaState(n=exp.n, t=exp.t, D=D,
                     a1_22=float(a1[1, 1].real),
                     a2_22=float(a2[1, 1].real),
                     a2_12=complex(a2[0, 1]),
                     a2_21=complex(a2[1, 0]),
                     a1_2i=a1_2i.copy(),
                     a1_i2=a1[2:, 1].copy(),
                     a2_i2=a2[2:, 1].copy(),
                     b_i=b_i,
                     a1_1i=a1[0, 2:].copy(),
                     a1_i1=a1[2:, 0].copy())


def toda_state(V0: Potential, n: int, t: float,
               cfg: QuadConfig = DEFAULT_CFG) -> TodaState:
    V = Potential(V0.v0_coeffs, V0.t + t)
    sys = get_system(V, max(n, 1), cfg)
    return state_from_expansion(expansion(sys, n, cfg), V.D)


# --------------------------------------------------------------------------
# residual machinery
# --------------------------------------------------------------------------

def _ddt(state_fn, n: int, t: float, h: float, pick):
    """Richardson-extrapolated central difference of pick(state at (n, .))."""
    def f(tau):
        return np.asarray(pick(state_fn(n, tau)))

    coarse = (f(t + h) - f(t - h)) / (2.0 * h)
    fine = (f(t + h / 2) - f(t - h / 2)) / h
    return (4.0 * fine - coarse) / 3.0


def _rel(lhs, rhs) -> float:
    lhs = np.atleast_1d(np.asarray(lhs))
    rhs = np.atleast_1d(np.asarray(rhs))
    scale = max(1.0, float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
    return float(np.max(np.abs(lhs - rhs)) / scale)


def ode_residuals(state_fn, n: int, t: float, h: float = 1e-4) -> dict:
    """Named residuals of every equation of the system at (n, t).

    ``state_fn(n, t) -> TodaState``; the b_i equation needs n >= 1 and is
    skipped at n = 0.
    """
    # highest n first so a memoized backend reuses one system per t sample
    s = {m: state_fn(m, t) for m in range(n + 2, max(n - 1, 0) - 1, -1)}
    sn, sn1, sn2 = s[n], s[n + 1], s[n + 2]
    for m in (n + 1, n + 2):
        if abs(s[m].a2_12) < 1e-12:
            raise DenominatorVanishing(f"a2_12({m}) = {s[m].a2_12} too small")

    out = {}
    out["a1_22"] = _rel(_ddt(state_fn, n, t, h, lambda st: st.a1_22),
                        np.dot(sn.a1_2i, sn.a1_i2))
    out["a1_2i"] = _rel(_ddt(state_fn, n, t, h, lambda st: st.a1_2i), sn.b_i)
    out["a1_i2"] = _rel(_ddt(state_fn, n, t, h, lambda st: st.a1_i2),
                        sn.a2_i2 - sn.a1_i2 * sn.a1_22)
    out["a2_22"] = _rel(_ddt(state_fn, n, t, h, lambda st: st.a2_22),
                        np.dot(sn.a1_2i, sn.a2_i2))
    d_a2_12 = _ddt(state_fn, n + 1, t, h, lambda st: st.a2_12)
    out["ln_a2_12"] = _rel(complex(d_a2_12) / sn1.a2_12,
                           2.0 * sn.a1_22 - np.dot(sn.a1_2i, sn1.a2_i2))
    rhs_i2 = (sn1.a2_i2 * sn.a1_22 + sn1.a1_i2 * sn.a2_22
              + sn.a1_i2 - sn1.a1_i2 * sn1.a2_22
              + sn2.a1_i2 * (sn1.a2_12 / sn2.a2_12)
              - sn1.a1_i2 * sn.a1_22 ** 2
              - sn1.a1_i2 * np.dot(sn.a1_2i, sn.a1_i2))
    out["a2_i2"] = _rel(_ddt(state_fn, n + 1, t, h, lambda st: st.a2_i2), rhs_i2)
    if n >= 1:
        snm = s[n - 1]
        rhs_b = ((sn.a2_12 / sn1.a2_12) * snm.a1_2i
                 + sn1.a1_22 * sn.a1_22 * sn.a1_2i
                 + sn1.a1_2i - sn1.a2_22 * sn.a1_2i + sn.a2_22 * sn.a1_2i
                 - sn.a1_2i * sn.a1_22 ** 2 - sn.a1_22 * sn.b_i
                 - 2.0 * sn.a1_2i * np.dot(sn.a1_2i, sn.a1_i2)
                 + sn1.a1_22 * sn.b_i)
        out["b_i"] = _rel(_ddt(state_fn, n, t, h, lambda st: st.b_i), rhs_b)
    return out


def constraint_checks(state_fn, n: int, t: float) -> dict:
    """Pointwise identities: the sum constraint, the two deduction
    identities, and the a2 product identity."""
    sn = state_fn(n, t)
    sn1 = state_fn(n + 1, t)
    out = {
        "sum_constraint": _rel(np.dot(sn.a1_2i, sn1.a1_i2), 2.0),
        "deduce_i1": _rel(sn.a1_i1, sn.a2_21 * sn1.a1_i2),
        "deduce_1i": _rel(sn1.a1_1i, sn1.a2_12 * sn.a1_2i),
        "a2_product": _rel(sn.a2_21 * sn1.a2_12, 1.0),
    }
    return out


# --------------------------------------------------------------------------
# D = 2 closed-form oracle
# --------------------------------------------------------------------------

def _rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles (nonpositive integers)."""
    if x <= 0 and float(x).is_integer():
        return 0.0
    return 1.0 / math.gamma(x)


def exact_d2_state(n: int, t: float) -> TodaState:
    """Closed-form variables for D = 2, V0 = z^2/2."""
    if n < 0:
        raise OutOfRange("n must be nonnegative")
    rp = math.sqrt(math.pi)
    e_p = math.exp(0.5 * t * t)
    e_m = math.exp(-0.5 * t * t)
    a1_23 = -e_p * math.gamma(n + 1) / math.sqrt(2.0)
    a1_32 = -2.0 * math.sqrt(2.0) * e_m * _rgamma(n)
    a2_12 = -1j * rp * 4.0 ** n * math.exp(-t * t) * _rgamma(2 * n)
    a2_21 = -(math.gamma(2 * n + 2) * rp * math.exp(t * t)
              / (2.0 ** (2 * n + 1) * 2j * math.pi))
    a2_32 = -2.0 * math.sqrt(2.0) * (2 * n - 1) * t * e_m * _rgamma(n)
    a1_13 = 2j * math.pi * e_m / (math.sqrt(2.0) * math.gamma(n + 0.5))
    a1_31 = e_p * 2.0 * math.sqrt(2.0) * math.gamma(n + 1.5) / (2j * math.pi)
    b_3 = -t * e_p * math.gamma(n + 1) / math.sqrt(2.0)
    return TodaState(n=n, t=t, D=2,
                     a1_22=2.0 * n * t,
                     a2_22=n * (2 * n - 1) * (t * t - 0.5) + n,
                     a2_12=a2_12,
                     a2_21=a2_21,
                     a1_2i=np.array([a1_23], dtype=complex),
                     a1_i2=np.array([a1_32], dtype=complex),
                     a2_i2=np.array([a2_32], dtype=complex),
                     b_i=np.array([b_3], dtype=complex),
                     a1_1i=np.array([a1_13], dtype=complex),
                     a1_i1=np.array([a1_31], dtype=complex))


def exact_state_fn(n: int, t: float) -> TodaState:
    return exact_d2_state(n, t)


def state_diff(a: TodaState, b: TodaState) -> float:
    """Worst entrywise gap between two states (scaled by max(1, magnitude))."""
    gaps = [
        _rel(a.a1_22, b.a1_22), _rel(a.a2_22, b.a2_22),
        _rel(a.a2_12, b.a2_12), _rel(a.a2_21, b.a2_21),
        _rel(a.a1_2i, b.a1_2i), _rel(a.a1_i2, b.a1_i2),
        _rel(a.a2_i2, b.a2_i2), _rel(a.b_i, b.b_i),
        _rel(a.a1_1i, b.a1_1i), _rel(a.a1_i1, b.a1_i1),
    ]
    return max(gaps)


def numeric_state_fn(V0: Potential, cfg: QuadConfig = DEFAULT_CFG):
    def fn(n: int, t: float) -> TodaState:
        return toda_state(V0, n, t, cfg)
    return fn
