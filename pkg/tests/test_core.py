import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsestqp.core import (
    DEFAULT_TOL,
    DimensionMismatch,
    ExtendedLiftedPoint,
    ToleranceConfig,
    check_r1rho_feasible,
    check_r2rho_feasible,
    check_r3rho_feasible,
    in_F_rho,
    min_eigenvalue,
    support_of,
)
from sparsestqp.lift import lift_rank_one, witness_r1_rho1, witness_r2


class TestSupportOf:
    def test_unit_vector(self):
        assert support_of([1.0, 0.0, 0.0]).indices == (0,)
        assert support_of([1.0, 0.0, 0.0]).nu == 1

    def test_below_threshold(self):
        assert support_of([0.5, 0.5, 1e-12]).nu == 2

    def test_example_point(self):
        assert support_of([0.6, 0.2, 0.05, 0.05, 0.05, 0.05]).nu == 6

    @given(st.permutations(list(range(5))))
    @settings(deadline=None, max_examples=30)
    def test_permutation_invariant(self, perm):
        x = np.array([0.4, 0.3, 0.0, 0.2, 0.1])
        assert support_of(x[list(perm)]).nu == support_of(x).nu


class TestInFRho:
    def test_vertex(self):
        assert in_F_rho([1.0, 0.0, 0.0], 1)

    def test_two_positive_rho_one(self):
        assert not in_F_rho([0.5, 0.5, 0.0], 1)

    def test_barycenter(self):
        assert in_F_rho([1 / 3, 1 / 3, 1 / 3], 3)


class TestMinEigenvalue:
    def test_identity(self):
        assert min_eigenvalue(np.eye(3)) == pytest.approx(1.0)

    def test_rank_deficient_centered_diag(self):
        a = np.array([0.5, 0.5])
        assert min_eigenvalue(np.diag(a) - np.outer(a, a)) == pytest.approx(0.0, abs=1e-12)

    def test_indefinite(self):
        assert min_eigenvalue([[1.0, 2.0], [2.0, 1.0]]) == pytest.approx(-1.0)

    @given(
        st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=2, max_size=6)
    )
    @settings(deadline=None, max_examples=60)
    def test_centered_diag_psd_property(self, entries):
        a = np.asarray(entries)
        if a.sum() > 1.0:
            a = a / (a.sum() + 0.25)
        assert min_eigenvalue(np.diag(a) - np.outer(a, a)) >= -DEFAULT_TOL.psd_tol


class TestCheckers:
    def test_r1_rho1_witness_feasible(self):
        p = witness_r1_rho1([0.3, 0.7])
        assert check_r1rho_feasible(p, 1).feasible

    def test_r1_vertex_cover_feasible(self):
        e1 = np.array([1.0, 0.0, 0.0])
        u = np.array([1.0, 1.0, 0.0])
        assert check_r1rho_feasible(lift_rank_one(e1, u), 2).feasible

    def test_r1_detects_ue_violation(self):
        x = np.array([0.5, 0.5, 0.0])
        u = np.array([1.0, 1.0, 0.0])
        p = lift_rank_one(x, u)
        bad = ExtendedLiftedPoint(x=p.x, u=p.u, X=p.X, U=p.U + np.diag(u), R=p.R)
        report = check_r1rho_feasible(bad, 2)
        assert not report.feasible
        assert report.violated("Ue = rho*u")

    def test_r2_witness_feasible(self):
        p = witness_r2([0.5, 0.5], np.zeros((2, 2)), 1)
        assert check_r2rho_feasible(p, 1).feasible

    def test_r2_rank_one_with_interpolated_u(self):
        x = np.array([0.2, 0.3, 0.5, 0.0])
        p = witness_r2(x, np.zeros((4, 4)), 2)
        assert check_r2rho_feasible(p, 2).feasible

    def test_r2_detects_psd_violation(self):
        x = np.array([0.5, 0.5])
        p = witness_r2(x, np.zeros((2, 2)), 1)
        bad = ExtendedLiftedPoint(
            x=p.x, u=p.u, X=p.X - 1e-3 * np.eye(2), U=p.U, R=p.R
        )
        report = check_r2rho_feasible(bad, 1)
        assert not report.feasible
        assert report.min_psd_eigenvalue < -DEFAULT_TOL.psd_tol

    def test_r3_binary_cover_feasible(self):
        x = np.array([0.5, 0.5, 0.0])
        u = np.array([1.0, 1.0, 0.0])
        assert check_r3rho_feasible(lift_rank_one(x, u), 2).feasible

    def test_r3_uniform4_infeasible_for_every_binary_u(self):
        # rank-one lifts with four positive coordinates are cut off at rho = 2
        x = np.array([0.25, 0.25, 0.25, 0.25])
        from itertools import combinations

        for supp in combinations(range(4), 2):
            u = np.zeros(4)
            u[list(supp)] = 1.0
            assert not check_r3rho_feasible(lift_rank_one(x, u), 2).feasible

    def test_r3_implies_r1_and_r2(self):
        x = np.array([0.5, 0.5, 0.0])
        p = lift_rank_one(x, np.array([1.0, 1.0, 0.0]))
        assert check_r3rho_feasible(p, 2).feasible
        assert check_r1rho_feasible(p, 2).feasible
        assert check_r2rho_feasible(p, 2).feasible

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            ExtendedLiftedPoint(
                x=np.ones(2) / 2,
                u=np.ones(3),
                X=np.eye(2),
                U=np.eye(2),
                R=np.eye(2),
            )


class TestToleranceConfig:
    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            ToleranceConfig(eq_tol=0.0)
