import numpy as np
import pytest

from skewrh import (assemble_even, assemble_even_dual, assemble_odd, expansion,
                    jump_residual, recurrence_factor, recurrence_residual,
                    symmetry_residual)
from skewrh.rhp import EVEN_A, ODD_B, dual_column, even_rows

Z_OFF = 2.0 + 1.0j


def _jump_points(D, odd):
    pts = [1.3 + 0j, -1.3 + 0j]
    pts += [1.3 * np.exp(2j * np.pi * k / D) for k in range(1, D) if k != D // 2]
    if odd:
        pts.append(np.exp(1j * np.pi / 3))
    return pts


@pytest.mark.parametrize("fixture", ["d2_system", "d4_system"])
class TestMatrixProblems:
    def test_even_jumps(self, fixture, request):
        sys = request.getfixturevalue(fixture)
        for n in (1, 2):
            for x in _jump_points(sys.D, odd=False):
                assert jump_residual(sys, EVEN_A, n, x) <= 1e-6

    def test_odd_jumps(self, fixture, request):
        sys = request.getfixturevalue(fixture)
        for n in (1, 2):
            for x in _jump_points(sys.D, odd=True):
                assert jump_residual(sys, ODD_B, n, x) <= 1e-6

    def test_unimodular(self, fixture, request):
        sys = request.getfixturevalue(fixture)
        for n in (1, 2, 3):
            for asm in (assemble_even, assemble_odd):
                det = np.linalg.det(asm(sys, n, Z_OFF).value)
                assert abs(det - 1.0) <= 1e-8

    def test_symmetry(self, fixture, request):
        sys = request.getfixturevalue(fixture)
        for n in (1, 2):
            for which in (EVEN_A, ODD_B):
                assert symmetry_residual(sys, which, n, 1.0 + 2.0j) <= 1e-7

    def test_dual_assembly_is_inverse_transpose(self, fixture, request):
        sys = request.getfixturevalue(fixture)
        for n in (1, 2):
            a = assemble_even(sys, n, Z_OFF).value
            ahat = assemble_even_dual(sys, n, Z_OFF).value
            assert np.max(np.abs(ahat.T @ a - np.eye(len(a)))) <= 1e-8

    def test_dual_column_polynomials(self, fixture, request):
        # closed-form second column of the dual problem vs the inverse
        sys = request.getfixturevalue(fixture)
        n = 2
        inv_t = np.linalg.inv(assemble_even(sys, n, Z_OFF).value).T
        col = [c(Z_OFF) for c in dual_column(sys, n)]
        assert np.max(np.abs(np.asarray(col) - inv_t[:, 1])) <= 1e-8

    def test_first_column_rows(self, fixture, request):
        sys = request.getfixturevalue(fixture)
        n = 2
        rows = even_rows(sys, n)
        a = assemble_even(sys, n, Z_OFF).value
        got = np.asarray([p(Z_OFF) for p in rows])
        assert np.max(np.abs(got - a[:, 0])) <= 1e-10 * np.max(np.abs(got))


@pytest.mark.parametrize("fixture", ["d2_system", "d4_system"])
class TestExpansion:
    def test_structure_identities(self, fixture, request):
        sys = request.getfixturevalue(fixture)
        V = sys.V
        for n in (1, 2, 3):
            e = expansion(sys, n)
            a1, a2 = e.A1, e.A2
            # corner entries of the 1/z and 1/z^2 terms
            expect = -2j * np.pi * V.gamma * V.D / sys.h[n - 1]
            assert a2[0, 1] == pytest.approx(expect, rel=1e-9)
            assert abs(a1[0, 1]) <= 1e-9
            assert abs(a1[1, 0]) <= 1e-9
            assert np.max(np.abs(a2[:, 2:])) <= 1e-9 * max(1.0, np.max(np.abs(a2)))

    def test_product_and_sum_identities(self, fixture, request):
        sys = request.getfixturevalue(fixture)
        for n in (1, 2):
            en, en1 = expansion(sys, n), expansion(sys, n + 1)
            assert en.A2[1, 0] * en1.A2[0, 1] == pytest.approx(1.0, rel=1e-9)
            s = np.dot(en.A1[1, 2:], en1.A1[2:, 1]) \
                + en.A1[1, 0] * en1.A1[0, 1]
            assert s == pytest.approx(2.0, rel=1e-8)

    def test_recurrence(self, fixture, request):
        sys = request.getfixturevalue(fixture)
        for n in (1, 2):
            for z in (2.0 + 2.0j, -1.5 + 1.0j, 0.4 - 2.2j):
                assert recurrence_residual(sys, n, z) <= 1e-6

    def test_z2_compatibility(self, fixture, request):
        sys = request.getfixturevalue(fixture)
        e1, e2, e3 = (expansion(sys, m) for m in (1, 2, 3))
        _, _, k1 = recurrence_factor(e1, e2)
        r1b, _, k2 = recurrence_factor(e2, e3)
        r1a, _, _ = recurrence_factor(e1, e2)
        dim = sys.D + 1
        E2 = np.zeros((dim, dim))
        E2[1, 1] = 1.0
        sig = np.diag([1.0, -1.0] + [0.0] * (dim - 2))
        comp = E2 @ k1 - k2 @ E2 + (r1a @ sig - sig @ r1a)
        assert np.max(np.abs(comp)) <= 1e-8
