"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Tolerances and ranges are pinned here; do not loosen them.
"""

import math
import time

import numpy as np
import pytest

from skewrh import (Poly, Potential, beta, build_ladder, count_sign_changes,
                    debruijn_check, evaluate, get_system, hermite_monic,
                    jump_residual, recurrence_residual, skew_product,
                    symmetry_residual)
from skewrh.kernel import density_integral
from skewrh.rhp import EVEN_A, ODD_B
from skewrh.toda import (constraint_checks, exact_d2_state, exact_state_fn,
                         numeric_state_fn, ode_residuals, state_diff)

V2 = Potential((0.0, 0.0, 0.5))
V4 = Potential((0.0, 0.0, 0.0, 0.0, 1.0))


@pytest.fixture
def report(capsys, request):
    t0 = time.perf_counter()
    label = request.node.get_closest_marker("criterion").args[0]
    outcome = {"ok": False}
    yield outcome
    status = "PASS" if outcome["ok"] else "FAIL"
    with capsys.disabled():
        print(f"criterion {label}: {status} ({time.perf_counter() - t0:.1f}s)")


@pytest.mark.criterion("1 (D=2 closed forms)")
def test_criterion_1(report):
    t0 = time.perf_counter()
    sys = get_system(V2, 6)
    worst = 0.0
    for n in range(7):
        expected = {
            "psi_even": hermite_monic(2 * n + 1),
            "psi_odd": hermite_monic(2 * n + 2) - (n + 0.5) * hermite_monic(2 * n),
            "r1": (-2j * math.pi / (math.sqrt(2.0) * math.gamma(n + 0.5)))
            * hermite_monic(2 * n),
            "p_even": sum((math.factorial(n) / math.factorial(k))
                          * hermite_monic(2 * k) for k in range(n + 1)),
            "p_odd": hermite_monic(2 * n + 1),
        }
        got = {
            "psi_even": sys.psi(2 * n), "psi_odd": sys.psi(2 * n + 1),
            "r1": sys.r(n, 1), "p_even": sys.p(2 * n), "p_odd": sys.p(2 * n + 1),
        }
        for key, ref in expected.items():
            gap = (got[key] - ref).max_abs_coeff() / ref.max_abs_coeff()
            worst = max(worst, gap)
    elapsed = time.perf_counter() - t0
    report["ok"] = worst <= 1e-8 and elapsed < 5.0
    assert worst <= 1e-8
    assert elapsed < 5.0


@pytest.mark.criterion("2 (skew-orthogonality Gram structure)")
def test_criterion_2(report):
    t0 = time.perf_counter()
    worst = 0.0
    for V in (V2, V4):
        sys = get_system(V, 4)
        dim = 10
        g = np.zeros((dim, dim))
        for i in range(dim):
            for j in range(i + 1, dim):
                g[i, j] = skew_product(sys.p(i), sys.p(j), V, sys.cfg)
                g[j, i] = -g[i, j]
        expect = np.zeros_like(g)
        for k in range(5):
            expect[2 * k, 2 * k + 1] = sys.h[k]
            expect[2 * k + 1, 2 * k] = -sys.h[k]
        assert all(h > 0 for h in sys.h)
        worst = max(worst, np.max(np.abs(g - expect)) / np.max(np.abs(g)))
    elapsed = time.perf_counter() - t0
    report["ok"] = worst <= 1e-8 and elapsed < 30.0
    assert worst <= 1e-8
    assert elapsed < 30.0


@pytest.mark.criterion("3 (Christoffel-Darboux vs direct pre-kernel)")
def test_criterion_3(report):
    t0 = time.perf_counter()
    xs = np.linspace(-3.0, 3.0, 20)
    worst_off, worst_diag, worst_int = 0.0, 0.0, 0.0
    for V in (V2, V4):
        sys = get_system(V, 4)
        for n in range(1, 5):
            for x in xs:
                for y in xs:
                    ev = evaluate(sys, n, float(x), float(y))
                    if x == y:
                        worst_diag = max(worst_diag, ev.rel_gap)
                    else:
                        worst_off = max(worst_off, ev.rel_gap)
            worst_int = max(worst_int, abs(density_integral(sys, n) - n))
    elapsed = time.perf_counter() - t0
    ok = worst_off <= 1e-8 and worst_diag <= 1e-6 and worst_int <= 1e-6
    report["ok"] = ok and elapsed < 60.0
    assert worst_off <= 1e-8
    assert worst_diag <= 1e-6
    assert worst_int <= 1e-6
    assert elapsed < 60.0


@pytest.mark.criterion("4 (matrix problem: jumps, det, symmetry)")
def test_criterion_4(report):
    t0 = time.perf_counter()
    worst_jump, worst_det, worst_sym = 0.0, 0.0, 0.0
    from skewrh import assemble_even, assemble_odd
    for V in (V2, V4):
        sys = get_system(V, 4)
        D = V.D
        # one point per contour component: positive and negative real axis
        # plus every rotated ray, and the circle for the odd problem
        pts = [1.3 + 0j, -1.3 + 0j]
        pts += [1.3 * np.exp(2j * np.pi * k / D) for k in range(1, D)
                if k != D // 2]
        for n in (1, 2, 3):
            for which, asm, extra in ((EVEN_A, assemble_even, []),
                                      (ODD_B, assemble_odd,
                                       [np.exp(1j * np.pi / 3),
                                        np.exp(-2j * np.pi / 5)])):
                for x in pts + extra:
                    worst_jump = max(worst_jump, jump_residual(sys, which, n, x))
                z = 2.0 + 1.0j
                det = np.linalg.det(asm(sys, n, z).value)
                worst_det = max(worst_det, abs(det - 1.0))
                worst_sym = max(worst_sym,
                                symmetry_residual(sys, which, n, 1.0 + 2.0j))
    elapsed = time.perf_counter() - t0
    ok = worst_jump <= 1e-6 and worst_det <= 1e-8 and worst_sym <= 1e-7
    report["ok"] = ok and elapsed < 120.0
    assert worst_jump <= 1e-6
    assert worst_det <= 1e-8
    assert worst_sym <= 1e-7
    assert elapsed < 120.0


@pytest.mark.criterion("5 (structural propositions)")
def test_criterion_5(report):
    worst_beta, worst_delta, worst_intr = 0.0, 0.0, 0.0
    signs_ok = True
    for V in (V2, V4):
        sys = get_system(V, 4)
        D = V.D
        for m in range(10):
            for j in range(1, D):
                worst_beta = max(worst_beta,
                                 abs(beta(sys.psi(m), j, m // 2, V, sys.cfg)))
        for n in range(4):
            for i in range(1, D):
                for j in range(1, D):
                    got = beta(sys.r(n, i), j, n, V, sys.cfg)
                    worst_delta = max(worst_delta,
                                      abs(got - (1.0 if i == j else 0.0)))
            assert (sys.r(n, D) + sys.psi(2 * n)).max_abs_coeff() == 0.0
            signs_ok &= count_sign_changes(sys.psi(2 * n)) >= 2 * n + 1
        lad = build_ladder(sys, 4)
        for k in range(4):
            intr = -np.sum(lad.beta_even[k] * lad.xi[k, k])
            worst_intr = max(worst_intr, abs(intr - 2.0))
    ok = (worst_beta <= 1e-7 and worst_delta <= 1e-7
          and worst_intr <= 1e-7 and signs_ok)
    report["ok"] = ok
    assert worst_beta <= 1e-7
    assert worst_delta <= 1e-7
    assert worst_intr <= 1e-7
    assert signs_ok


@pytest.mark.criterion("6 (Pfaffian / multiple-integral identity)")
def test_criterion_6(report):
    t0 = time.perf_counter()
    worst = 0.0
    for V in (V2, V4):
        for n in (1, 2):
            lhs, rhs, rel = debruijn_check(V, n)
            assert lhs > 0 and rhs > 0
            worst = max(worst, rel)
    elapsed = time.perf_counter() - t0
    report["ok"] = worst <= 1e-6 and elapsed < 60.0
    assert worst <= 1e-6
    assert elapsed < 60.0


@pytest.mark.criterion("7 (dynamical system verification)")
def test_criterion_7(report):
    t0 = time.perf_counter()
    worst = {"d2": 0.0, "d4": 0.0, "con": 0.0, "match": 0.0, "exact": 0.0}
    fns = {"d2": numeric_state_fn(V2), "d4": numeric_state_fn(V4)}
    for key, tol in (("d2", 1e-5), ("d4", 1e-4)):
        for t in (-1.0, 0.3, 1.0):
            for n in range(4):
                res = ode_residuals(fns[key], n, t, h=1e-4)
                worst[key] = max(worst[key], max(res.values()))
                cons = constraint_checks(fns[key], n, t)
                worst["con"] = max(worst["con"], cons["sum_constraint"])
    for t in (-1.0, 0.3, 1.0):
        for n in range(4):
            worst["match"] = max(worst["match"],
                                 state_diff(fns["d2"](n, t), exact_d2_state(n, t)))
            res = ode_residuals(exact_state_fn, n, t, h=1e-5)
            worst["exact"] = max(worst["exact"], max(res.values()))
    elapsed = time.perf_counter() - t0
    ok = (worst["d2"] <= 1e-5 and worst["d4"] <= 1e-4 and worst["con"] <= 1e-7
          and worst["match"] <= 1e-6 and worst["exact"] <= 1e-8)
    report["ok"] = ok and elapsed < 300.0
    assert worst["d2"] <= 1e-5
    assert worst["d4"] <= 1e-4
    assert worst["con"] <= 1e-7
    assert worst["match"] <= 1e-6
    assert worst["exact"] <= 1e-8
    assert elapsed < 300.0


@pytest.mark.criterion("8 (Lax-type recurrence in n)")
def test_criterion_8(report):
    worst = 0.0
    for V in (V2, V4):
        sys = get_system(V, 4)
        for n in (1, 2):
            for z in (2.0 + 2.0j, -1.5 + 1.0j, 0.4 - 2.2j):
                worst = max(worst, recurrence_residual(sys, n, z))
    report["ok"] = worst <= 1e-6
    assert worst <= 1e-6
