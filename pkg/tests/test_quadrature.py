import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewrh import (Contour, Poly, PointOnContour, Potential, cauchy_transform,
                    circle_moment, gamma_integral, real_moment)
from skewrh.quadrature import (WEIGHT_EXP_V, WEIGHT_EXP_2V, circle_cauchy_xpow,
                               real_nodes)

D2 = Potential((0.0, 0.0, 0.5))
D4 = Potential((0.0, 0.0, 0.0, 0.0, 1.0))


def test_real_moments_gaussian_oracle():
    # int x^{2k} e^{-x^2} dx = Gamma(k + 1/2)
    for k in range(6):
        got = real_moment(Poly([1.0]), 2 * k, D2)
        assert got == pytest.approx(math.gamma(k + 0.5), rel=1e-12)
        assert real_moment(Poly([1.0]), 2 * k + 1, D2) == pytest.approx(0.0, abs=1e-14)


def test_gamma_integral_real_line_oracle():
    # Gamma_{D/2} is the real line; weight e^{-V} = e^{-x^2/2} for D = 2
    for k in range(4):
        got = gamma_integral(Poly([0.0] * (2 * k) + [1.0]), 1, D2, WEIGHT_EXP_V)
        expect = math.sqrt(2 * math.pi) * math.prod(range(1, 2 * k, 2))
        assert complex(got) == pytest.approx(expect, rel=1e-11)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(min_value=-2, max_value=2), min_size=1, max_size=5),
       st.integers(min_value=1, max_value=3))
def test_gamma_integral_kills_exact_derivatives(coeffs, k):
    # d/ds [q e^{-V}] integrates to zero over any two-ray contour
    q = Poly(coeffs)
    integrand = q.deriv() - D4.vprime() * q
    got = gamma_integral(integrand, k, D4, WEIGHT_EXP_V)
    scale = max(1.0, q.max_abs_coeff())
    assert abs(got) <= 1e-10 * scale


def test_circle_moment_is_minus_coefficient():
    assert circle_moment(Poly([0.0, 0.0, 1.0]), 3) == -1.0
    assert circle_moment(Poly([5.0, 2.0]), 2) == -2.0
    assert circle_moment(Poly([5.0]), 2) == 0.0


def test_cauchy_transform_plemelj_jump():
    # C(f)(x + i0) - C(f)(x - i0) = f(x) on the contour
    c = Contour("real", 2, 0)
    p = Poly([1.0, 0.5, 0.25])
    x = 0.7
    eps = 1e-7
    up = cauchy_transform(p, c, WEIGHT_EXP_2V, x + 1j * eps, V=D2)
    dn = cauchy_transform(p, c, WEIGHT_EXP_2V, x - 1j * eps, V=D2)
    expect = p(x) * math.exp(-x * x)
    assert complex(up - dn) == pytest.approx(expect, rel=1e-5)


def test_cauchy_transform_decay_at_infinity():
    c = Contour("real", 2, 0)
    p = Poly([1.0])
    z = 50.0 + 50.0j
    got = cauchy_transform(p, c, WEIGHT_EXP_2V, z, V=D2)
    expect = -math.sqrt(math.pi) / (2j * math.pi * z)
    assert complex(got) == pytest.approx(expect, rel=1e-2)


def test_cauchy_transform_point_on_contour():
    c = Contour("real", 2, 0)
    with pytest.raises(PointOnContour):
        cauchy_transform(Poly([1.0]), c, WEIGHT_EXP_2V, 0.3 + 0j, V=D2)


def test_circle_residues_against_trapezoid():
    p = Poly([0.3, -1.0, 0.0, 2.0])
    m = 4
    th = np.linspace(0.0, 2 * np.pi, 4097)[:-1]
    w = np.exp(1j * th)
    for z in (2.0 + 1.0j, 0.3 - 0.2j):
        num = np.sum(np.asarray(p(w)) * w ** (-m) * 1j * w / (w - z)) \
            / (2j * np.pi) * (2 * np.pi / len(th))
        got = circle_cauchy_xpow(p, m, z)
        assert complex(got) == pytest.approx(complex(num), rel=1e-10, abs=1e-12)


def test_real_nodes_symmetric_window():
    x = real_nodes(D4)
    assert x[0] == pytest.approx(-x[-1])
    assert len(x) >= 64
