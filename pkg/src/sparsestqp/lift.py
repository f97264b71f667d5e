"""Constructive lifted witnesses and rank-one membership decisions.

Each witness builder realizes one constructive existence proof; the feasibility
checkers in core are the ground truth for what a builder guarantees. The
membership cascade prefers constructive certificates and falls back to an SDP
feasibility probe only when no closed-form rule applies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closedform import in_G_rho, in_H_rho
from .core import (
    DEFAULT_TOL,
    DimensionMismatch,
    DomainError,
    ExtendedLiftedPoint,
    ToleranceConfig,
    as_sym_matrix,
    as_vector,
    check_r3rho_feasible,
    in_F,
    min_eigenvalue,
    support_of,
)


@dataclass(frozen=True)
class GeneralConstructParams:
    """Coefficients of the affine-u lifted construction for (x, rho):
    u = x + lambda*(e - x) on the support, U = uu' + alpha*(Diag(x) - xx')
    + beta*(Diag(a) - aa')."""

    lam: float
    alpha: float
    beta: float
    a: np.ndarray


@dataclass(frozen=True)
class MembershipVerdict:
    status: str  # "member" | "non_member" | "unknown"
    witness: ExtendedLiftedPoint | None
    reason: str


def lift_rank_one(x, u) -> ExtendedLiftedPoint:
    """Rank-one lift (x, u, xx', uu', xu')."""
    xv, uv = as_vector(x), as_vector(u)
    if xv.size != uv.size:
        raise DimensionMismatch("x and u dimensions differ")
    return ExtendedLiftedPoint(
        x=xv, u=uv, X=np.outer(xv, xv), U=np.outer(uv, uv), R=np.outer(xv, uv)
    )


def witness_r1_rho1(x, tol: ToleranceConfig = DEFAULT_TOL) -> ExtendedLiftedPoint:
    """Diagonal lift (x, x, Diag(x), Diag(x), Diag(x)), feasible at sparsity 1."""
    xv = as_vector(x)
    if not in_F(xv, tol):
        raise DomainError("x is not on the standard simplex")
    D = np.diag(xv)
    return ExtendedLiftedPoint(x=xv, u=xv, X=D, U=D, R=D)


def witness_r2(x, M, rho: int, tol: ToleranceConfig = DEFAULT_TOL) -> ExtendedLiftedPoint:
    """Shor-feasible lift of (x, xx' + M) for any PSD M.

    u interpolates x toward the all-ones vector so that e'u = rho, and
    U = uu' + Diag(u - u*u) keeps the moment block PSD.
    """
    xv = as_vector(x)
    Mv = as_sym_matrix(M)
    n = xv.size
    if n < 2:
        raise DomainError("need n >= 2")
    if Mv.shape[0] != n:
        raise DimensionMismatch("M dimension differs from x")
    if not in_F(xv, tol):
        raise DomainError("x is not on the standard simplex")
    if min_eigenvalue(Mv) < -tol.psd_tol:
        raise DomainError("M is not positive semidefinite")
    if not 1 <= rho <= n:
        raise DomainError(f"rho={rho} outside [1, {n}]")
    u = xv + ((rho - 1) / (n - 1)) * (np.ones(n) - xv)
    U = np.outer(u, u) + np.diag(u - u * u)
    return ExtendedLiftedPoint(
        x=xv, u=u, X=np.outer(xv, xv) + Mv, U=U, R=np.outer(xv, u)
    )


def witness_binary_cover(
    x, X, rho: int, tol: ToleranceConfig = DEFAULT_TOL
) -> ExtendedLiftedPoint:
    """Lift a doubly-nonnegative-feasible (x, X) with at most rho nonzeros by
    a binary u covering the support, padded with the smallest free indices."""
    xv = as_vector(x)
    Xv = as_sym_matrix(X)
    n = xv.size
    if Xv.shape[0] != n:
        raise DimensionMismatch("X dimension differs from x")
    if not in_F(xv, tol):
        raise DomainError("x is not on the standard simplex")
    if abs(float(np.max(np.abs(Xv @ np.ones(n) - xv)))) > tol.eq_tol:
        raise DomainError("Xe != x")
    if float(np.min(Xv)) < -tol.ineq_tol:
        raise DomainError("X has negative entries")
    if min_eigenvalue(Xv - np.outer(xv, xv)) < -tol.psd_tol:
        raise DomainError("X - xx' is not positive semidefinite")
    supp = support_of(xv, tol)
    if supp.nu > rho:
        raise DomainError(f"support size {supp.nu} exceeds rho={rho}")
    u = np.zeros(n)
    u[list(supp.indices)] = 1.0
    for i in range(n):
        if int(u.sum()) == rho:
            break
        if u[i] == 0.0:
            u[i] = 1.0
    return ExtendedLiftedPoint(x=xv, u=u, X=Xv, U=np.outer(u, u), R=np.outer(xv, u))


def general_construct_params(
    x, rho: int, tol: ToleranceConfig = DEFAULT_TOL
) -> GeneralConstructParams:
    """Coefficients lambda, alpha, beta, a of the affine-u construction."""
    xv = as_vector(x)
    if not in_F(xv, tol):
        raise DomainError("x is not on the standard simplex")
    nu = support_of(xv, tol).nu
    if rho < 2 or nu < rho + 1 or nu < 3:
        raise DomainError(
            f"construction needs rho >= 2 and support size >= max(rho+1, 3); "
            f"got rho={rho}, nu={nu}"
        )
    lam = (rho - 1) / (nu - 1)
    alpha = (nu - rho) * (nu - rho - 1) / ((nu - 1) * (nu - 2))
    beta = (nu - rho) * (rho - 1) / (nu - 2)
    a = np.where(np.abs(xv) > tol.support_tol, (1.0 - xv) / (nu - 1), 0.0)
    return GeneralConstructParams(lam=lam, alpha=alpha, beta=beta, a=a)


def witness_general_construct(
    x, rho: int, tol: ToleranceConfig = DEFAULT_TOL
) -> ExtendedLiftedPoint:
    """Affine-u lifted tuple for a rank-one (x, xx').

    Guaranteed feasible at sparsity rho when the support size is at most
    2*rho - 1 or when x satisfies the pair-product condition; otherwise the
    tuple is returned as-is for the caller's checker.
    """
    xv = as_vector(x)
    params = general_construct_params(xv, rho, tol)
    on_supp = np.abs(xv) > tol.support_tol
    u = np.where(on_supp, xv + params.lam * (1.0 - xv), 0.0)
    a = params.a
    U = (
        np.outer(u, u)
        + params.alpha * (np.diag(xv) - np.outer(xv, xv))
        + params.beta * (np.diag(a) - np.outer(a, a))
    )
    return ExtendedLiftedPoint(
        x=xv, u=u, X=np.outer(xv, xv), U=U, R=np.outer(xv, u)
    )


def lift_sparsity_step(
    p: ExtendedLiftedPoint, rho: int, tol: ToleranceConfig = DEFAULT_TOL
) -> ExtendedLiftedPoint:
    """Promote a rank-one feasible tuple at sparsity rho to one at rho + 1,
    keeping (x, X) fixed.

    Requires X = xx' and support size > 2*rho + 1 (callers handle smaller
    supports via witness_general_construct directly).
    """
    x, u, U = p.x, p.u, p.U
    if rho < 2:
        raise DomainError("sparsity step needs rho >= 2")
    if float(np.max(np.abs(p.X - np.outer(x, x)))) > max(tol.eq_tol, 1e-6):
        raise DomainError("X != xx'")
    nu = support_of(x, tol).nu
    if nu <= 2 * rho + 1:
        raise DomainError(f"support size {nu} must exceed 2*rho+1 = {2 * rho + 1}")
    u_supp = np.abs(u) > tol.support_tol
    mu = int(np.count_nonzero(u_supp)) - rho
    s = np.where(u_supp, (1.0 - u) / mu, 0.0)
    u_new = u + s
    U_new = (
        np.outer(u_new, u_new)
        + ((mu - 2) / mu) * (U - np.outer(u, u))
        + np.diag(s)
        - np.outer(s, s)
    )
    return ExtendedLiftedPoint(
        x=x, u=u_new, X=np.outer(x, x), U=U_new, R=np.outer(x, u_new)
    )


def u_lower_bound_residuals(p: ExtendedLiftedPoint, rho: int) -> np.ndarray:
    """Residuals (rho-2)*u_i + 2*R_ii + (1-rho)*x_i - X_ii; a negative entry
    certifies infeasibility of the combined relaxation at sparsity rho."""
    return (
        (rho - 2) * p.u
        + 2.0 * np.diag(p.R)
        + (1 - rho) * p.x
        - np.diag(p.X)
    )


def _checked_member(
    witness: ExtendedLiftedPoint, rho: int, reason: str, tol: ToleranceConfig
) -> MembershipVerdict:
    report = check_r3rho_feasible(witness, rho, tol)
    if not report.feasible:
        # A guaranteed construction failing the checker indicates a numerical
        # edge case; report it honestly rather than claiming membership.
        return MembershipVerdict(
            status="unknown", witness=witness, reason=f"{reason}; checker disagreed"
        )
    return MembershipVerdict(status="member", witness=witness, reason=reason)


def rank_one_membership(
    x, rho: int, solver=None, tol: ToleranceConfig = DEFAULT_TOL
) -> MembershipVerdict:
    """Decide whether the rank-one lift (x, xx') is retained by the combined
    relaxation at sparsity rho.

    Cascade: exact rules for rho = 1 and rho = 2, binary cover for sparse x,
    the affine-u construction where it is guaranteed, then an SDP feasibility
    probe as a last resort. `solver` overrides the probe (signature
    (x, rho) -> SolveResult) and exists mainly for testing.
    """
    xv = as_vector(x)
    if not in_F(xv, tol):
        raise DomainError("x is not on the standard simplex")
    n = xv.size
    if not 1 <= rho <= n:
        raise DomainError(f"rho={rho} outside [1, {n}]")
    nu = support_of(xv, tol).nu

    if rho == 1:
        if nu == 1:
            w = witness_binary_cover(xv, np.outer(xv, xv), 1, tol)
            return _checked_member(w, 1, "vertex rule (rho=1, nu=1)", tol)
        return MembershipVerdict(
            status="non_member", witness=None,
            reason="rho=1 retains only vertices (nu > 1)",
        )

    if nu <= rho:
        w = witness_binary_cover(xv, np.outer(xv, xv), rho, tol)
        return _checked_member(w, rho, "binary cover (nu <= rho)", tol)

    if rho == 2:
        if nu <= 3:
            w = witness_general_construct(xv, 2, tol)
            return _checked_member(w, 2, "half-sum construction (rho=2, nu=3)", tol)
        return MembershipVerdict(
            status="non_member", witness=None,
            reason="rho=2 cuts off every support larger than 3",
        )

    if nu <= 2 * rho - 1 or rho > (n + 1) // 2:
        w = witness_general_construct(xv, rho, tol)
        return _checked_member(
            w, rho, "affine-u construction (nu <= 2*rho-1 or large rho)", tol
        )
    if 2 <= rho <= n // 2 and in_G_rho(xv, rho, tol):
        w = witness_general_construct(xv, rho, tol)
        return _checked_member(w, rho, "affine-u construction (pair-product set)", tol)
    if 3 <= rho <= n // 2 and in_H_rho(xv, rho, tol):
        w = witness_general_construct(xv, rho, tol)
        return _checked_member(w, rho, "affine-u construction (pair-sum set)", tol)

    if solver is None:
        from .relax import feasibility_probe_rank_one

        solver = feasibility_probe_rank_one
    result = solver(xv, rho)
    if result.status == "optimal":
        witness = ExtendedLiftedPoint(
            x=xv,
            u=result.point["u"],
            X=np.outer(xv, xv),
            U=0.5 * (result.point["U"] + result.point["U"].T),
            R=result.point["R"],
        )
        return MembershipVerdict(
            status="member", witness=witness, reason="SDP probe feasible"
        )
    if result.status == "infeasible":
        return MembershipVerdict(
            status="non_member", witness=None, reason="SDP probe infeasible"
        )
    return MembershipVerdict(
        status="unknown", witness=None,
        reason=f"SDP probe inconclusive ({result.status})",
    )
