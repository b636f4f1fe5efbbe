import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewrh import NotSkewSymmetric, OddDimension, SingularMatrix, pfaffian, solve


def test_pfaffian_2x2():
    assert pfaffian([[0.0, 3.0], [-3.0, 0.0]]) == pytest.approx(3.0)


def test_pfaffian_4x4_cofactor_formula():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((4, 4))
    a = a - a.T
    expect = (a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2])
    assert pfaffian(a) == pytest.approx(expect, rel=1e-12)


def test_pfaffian_empty_and_zero():
    assert pfaffian(np.zeros((0, 0))) == 1.0
    assert pfaffian(np.zeros((4, 4))) == 0.0


def test_pfaffian_rejects_odd_and_nonskew():
    with pytest.raises(OddDimension):
        pfaffian(np.zeros((3, 3)))
    with pytest.raises(NotSkewSymmetric):
        pfaffian(np.eye(4))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=10 ** 6))
def test_pfaffian_squared_is_determinant(half, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((2 * half, 2 * half))
    a = a - a.T
    pf = pfaffian(a)
    assert pf ** 2 == pytest.approx(np.linalg.det(a), rel=1e-8, abs=1e-10)


def test_solve_and_conditioning():
    a = np.array([[2.0, 1.0], [1.0, 3.0]])
    x = solve(a, np.array([[1.0], [0.0]]))
    assert np.allclose(a @ x, [[1.0], [0.0]])
    with pytest.raises(SingularMatrix):
        solve(np.array([[1.0, 1.0], [1.0, 1.0]]), np.eye(2))
    with pytest.raises(SingularMatrix):
        solve(np.ones((2, 3)), np.eye(2))
