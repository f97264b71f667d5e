import numpy as np
import pytest

from conftest import EXLE_X, random_simplex_point
from sparsestqp.core import DomainError, check_r2rho_feasible, check_r3rho_feasible
from sparsestqp.lift import (
    general_construct_params,
    lift_rank_one,
    lift_sparsity_step,
    rank_one_membership,
    u_lower_bound_residuals,
    witness_binary_cover,
    witness_general_construct,
    witness_r1_rho1,
    witness_r2,
)


class TestLiftRankOne:
    def test_vertex(self):
        e1 = np.array([1.0, 0.0])
        p = lift_rank_one(e1, e1)
        for block in (p.X, p.U, p.R):
            np.testing.assert_allclose(block, np.outer(e1, e1))

    def test_row_scaling(self):
        x = np.array([0.5, 0.5, 0.0])
        u = np.array([1.0, 1.0, 0.0])
        p = lift_rank_one(x, u)
        np.testing.assert_allclose(p.R, np.outer(x, u))
        assert check_r3rho_feasible(p, 2).feasible

    def test_half_half(self):
        p = lift_rank_one([0.5, 0.5], [1.0, 1.0])
        assert check_r3rho_feasible(p, 2).feasible


class TestWitnessR1Rho1:
    def test_vertex(self):
        e2 = np.array([0.0, 1.0, 0.0])
        p = witness_r1_rho1(e2)
        np.testing.assert_allclose(p.X, np.outer(e2, e2))

    @pytest.mark.parametrize("x", [[0.3, 0.7], [0.25, 0.25, 0.25, 0.25]])
    def test_diag_lift_feasible(self, x):
        from sparsestqp.core import check_r1rho_feasible

        assert check_r1rho_feasible(witness_r1_rho1(x), 1).feasible

    def test_rejects_off_simplex(self):
        with pytest.raises(DomainError):
            witness_r1_rho1([0.5, 0.6])

    def test_random_points_property(self):
        from sparsestqp.core import check_r1rho_feasible

        rng = np.random.default_rng(11)
        for _ in range(20):
            x = rng.uniform(0.0, 1.0, 5)
            x /= x.sum()
            assert check_r1rho_feasible(witness_r1_rho1(x), 1).feasible


class TestWitnessR2:
    def test_rho1_keeps_x(self):
        p = witness_r2([0.5, 0.5], np.zeros((2, 2)), 1)
        np.testing.assert_allclose(p.u, p.x)
        assert check_r2rho_feasible(p, 1).feasible

    def test_vertex_interpolation(self):
        p = witness_r2([1.0, 0.0, 0.0], np.zeros((3, 3)), 2)
        np.testing.assert_allclose(p.u, [1.0, 0.5, 0.5])
        assert p.u.sum() == pytest.approx(2.0)

    def test_nontrivial_psd_part(self):
        n = 3
        M = np.eye(n) - np.ones((n, n)) / n
        p = witness_r2(np.full(n, 1 / n), M, 2)
        assert check_r2rho_feasible(p, 2).feasible

    def test_random_rank_one_property(self):
        rng = np.random.default_rng(5)
        for _ in range(15):
            n = int(rng.integers(2, 7))
            rho = int(rng.integers(1, n + 1))
            x = rng.uniform(0.0, 1.0, n)
            x /= x.sum()
            p = witness_r2(x, np.zeros((n, n)), rho)
            assert check_r2rho_feasible(p, rho).feasible


class TestWitnessBinaryCover:
    def test_pads_smallest_indices(self):
        x = np.array([0.5, 0.5, 0.0])
        p = witness_binary_cover(x, np.outer(x, x), 2)
        np.testing.assert_allclose(p.u, [1.0, 1.0, 0.0])
        p3 = witness_binary_cover(x, np.outer(x, x), 3)
        np.testing.assert_allclose(p3.u, [1.0, 1.0, 1.0])
        assert check_r3rho_feasible(p3, 3).feasible

    def test_full_cover_vertex(self):
        e1 = np.array([1.0, 0.0, 0.0])
        p = witness_binary_cover(e1, np.outer(e1, e1), 3)
        np.testing.assert_allclose(p.u, np.ones(3))

    def test_rejects_support_above_rho(self):
        x = np.array([0.5, 0.3, 0.2])
        with pytest.raises(DomainError):
            witness_binary_cover(x, np.outer(x, x), 2)


class TestGeneralConstruct:
    def test_hand_evaluated_coefficients(self):
        x = np.full(3, 1 / 3)
        params = general_construct_params(x, 2)
        assert params.lam == pytest.approx(0.5)
        assert params.alpha == pytest.approx(0.0)
        assert params.beta == pytest.approx(1.0)
        np.testing.assert_allclose(params.a, x)
        p = witness_general_construct(x, 2)
        np.testing.assert_allclose(p.u, np.full(3, 2 / 3))
        np.testing.assert_allclose(np.diag(p.U), p.u)
        assert check_r3rho_feasible(p, 2).feasible

    def test_boundary_support_guarantee(self):
        # nu = 2*rho - 1 branch
        x = np.zeros(6)
        x[:5] = 0.2
        assert check_r3rho_feasible(witness_general_construct(x, 3), 3).feasible

    def test_example_point_returned_but_infeasible(self):
        p = witness_general_construct(EXLE_X, 3)
        report = check_r3rho_feasible(p, 3)
        assert not report.feasible
        assert any("X - R' - R + U" in name for name, _ in report.violations)

    def test_structural_identities(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            n = int(rng.integers(4, 9))
            nu = int(rng.integers(3, n + 1))
            rho = int(rng.integers(2, nu))
            x = random_simplex_point(n, nu, rng)
            p = witness_general_construct(x, rho)
            assert p.u.sum() == pytest.approx(rho)
            assert np.all(p.x <= p.u + 1e-12)
            assert np.all(p.u <= 1.0 + 1e-12)
            np.testing.assert_allclose(np.diag(p.U), p.u, atol=1e-10)
            np.testing.assert_allclose(p.U @ np.ones(n), rho * p.u, atol=1e-9)

    def test_affine_family_coefficients_match(self):
        # off-diagonal support entries of U are affine: c*x_i + c*x_j + d with
        # the optimal coefficients of the affine-u family
        rng = np.random.default_rng(9)
        for _ in range(10):
            n, nu, rho = 8, 7, 3
            x = random_simplex_point(n, nu, rng)
            p = witness_general_construct(x, rho)
            tau_star = (nu - rho) / (nu - 1)
            c = (rho - 1) * (nu - rho) / ((nu - 1) * (nu - 2))
            d = (rho - 1) * (rho - 2) / ((nu - 1) * (nu - 2))
            supp = np.flatnonzero(x > 1e-12)
            for i in supp:
                assert p.u[i] == pytest.approx(tau_star * x[i] + (rho - tau_star) / nu)
                for j in supp:
                    if i < j:
                        assert p.U[i, j] == pytest.approx(c * x[i] + c * x[j] + d)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            witness_general_construct([0.5, 0.5, 0.0], 2)  # nu = rho
        with pytest.raises(DomainError):
            witness_general_construct([1.0, 0.0, 0.0], 2)  # nu < 3


class TestSparsityStep:
    @pytest.mark.parametrize("n", [8, 9])
    def test_uniform_step_feasible(self, n):
        x = np.full(n, 1.0 / n)
        verdict = rank_one_membership(x, 3)
        assert verdict.status == "member"
        stepped = lift_sparsity_step(verdict.witness, 3)
        assert check_r3rho_feasible(stepped, 4).feasible

    def test_rejects_non_rank_one(self):
        x = np.full(8, 0.125)
        p = witness_r1_rho1(x)
        with pytest.raises(DomainError):
            lift_sparsity_step(p, 3)

    def test_rejects_small_support(self):
        x = np.zeros(8)
        x[:6] = 1 / 6
        p = witness_general_construct(x, 3)
        with pytest.raises(DomainError):
            lift_sparsity_step(p, 3)  # nu = 6 <= 2*rho + 1


class TestULowerBound:
    def test_uniform4_violated_for_every_u(self):
        from itertools import combinations

        x = np.full(4, 0.25)
        for supp in combinations(range(4), 2):
            u = np.zeros(4)
            u[list(supp)] = 1.0
            residuals = u_lower_bound_residuals(lift_rank_one(x, u), 2)
            assert residuals.min() < 0

    def test_example_point_satisfied(self, exle_point):
        residuals = u_lower_bound_residuals(exle_point, 3)
        assert residuals.min() >= -1e-3  # 4-decimal rounding in the source

    def test_feasible_construction_satisfied(self):
        p = witness_general_construct(np.full(3, 1 / 3), 2)
        assert u_lower_bound_residuals(p, 2).min() >= -1e-10


class TestRankOneMembership:
    def test_vertex_rho1(self):
        assert rank_one_membership([1.0, 0.0, 0.0], 1).status == "member"

    def test_interior_rho1_not_member(self):
        assert rank_one_membership([0.5, 0.5], 1).status == "non_member"

    def test_uniform4_rho2_not_member(self):
        assert rank_one_membership(np.full(4, 0.25), 2).status == "non_member"

    def test_nu3_rho2_member(self):
        assert rank_one_membership([0.5, 0.3, 0.2, 0.0], 2).status == "member"

    def test_example_point_member_via_probe(self):
        verdict = rank_one_membership(EXLE_X, 3)
        assert verdict.status == "member"
        assert "probe" in verdict.reason
        from sparsestqp.core import ToleranceConfig

        loose = ToleranceConfig(eq_tol=1e-5, ineq_tol=1e-5, psd_tol=1e-5)
        assert check_r3rho_feasible(verdict.witness, 3, loose).feasible

    def test_uniform_always_member_for_rho3_up(self):
        n = 8
        for rho in (3, 4):
            for nu in range(rho + 1, n + 1):
                x = np.zeros(n)
                x[:nu] = 1.0 / nu
                assert rank_one_membership(x, rho).status == "member", (rho, nu)

    def test_monotone_in_rho(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            n = 6
            nu = int(rng.integers(1, n + 1))
            x = random_simplex_point(n, nu, rng)
            statuses = [rank_one_membership(x, rho).status for rho in range(1, n + 1)]
            for a, b in zip(statuses, statuses[1:]):
                assert not (a == "member" and b == "non_member")

    def test_rejects_off_simplex(self):
        with pytest.raises(DomainError):
            rank_one_membership([0.5, 0.6], 1)
