import pytest

from skewrh import OutOfRange, Potential, constraint_checks, ode_residuals
from skewrh.toda import (exact_d2_state, exact_state_fn, numeric_state_fn,
                         state_diff, toda_state)

V2 = Potential((0.0, 0.0, 0.5))
V4 = Potential((0.0, 0.0, 0.0, 0.0, 1.0))


def test_exact_solution_satisfies_odes():
    for t in (-1.0, 0.3, 1.0):
        for n in (0, 1, 2, 3):
            res = ode_residuals(exact_state_fn, n, t, h=1e-5)
            assert max(res.values()) <= 1e-8, (n, t, res)
            cons = constraint_checks(exact_state_fn, n, t)
            assert max(cons.values()) <= 1e-12


def test_numeric_matches_exact_d2():
    fn = numeric_state_fn(V2)
    for t in (-1.0, 0.3, 1.0):
        for n in (0, 1, 2, 3):
            gap = state_diff(fn(n, t), exact_d2_state(n, t))
            assert gap <= 1e-6, (n, t, gap)


def test_numeric_odes_d2():
    fn = numeric_state_fn(V2)
    for t in (-1.0, 1.0):
        for n in (0, 2):
            res = ode_residuals(fn, n, t, h=1e-4)
            assert max(res.values()) <= 1e-5, (n, t, res)


def test_numeric_odes_d4():
    fn = numeric_state_fn(V4)
    res = ode_residuals(fn, 1, 0.3, h=1e-4)
    assert max(res.values()) <= 1e-4, res
    cons = constraint_checks(fn, 1, 0.3)
    assert max(cons.values()) <= 1e-7


def test_b_equation_skipped_at_n_zero():
    res = ode_residuals(exact_state_fn, 0, 0.3, h=1e-5)
    assert "b_i" not in res
    res = ode_residuals(exact_state_fn, 1, 0.3, h=1e-5)
    assert "b_i" in res


def test_exact_state_rejects_negative_n():
    with pytest.raises(OutOfRange):
        exact_d2_state(-1, 0.0)


def test_state_is_smooth_in_t():
    a = toda_state(V2, 1, 0.2)
    b = toda_state(V2, 1, 0.2 + 1e-6)
    assert state_diff(a, b) <= 1e-4
