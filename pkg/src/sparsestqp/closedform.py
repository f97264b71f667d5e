"""Closed-form bounds, exactness predicates, and the sufficient-condition sets
for rank-one feasibility (the G/H machinery)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    DomainError,
    ToleranceConfig,
    as_sym_matrix,
    as_vector,
    in_F,
    min_eigenvalue,
    support_of,
)


class CertificateInvalid(ValueError):
    """A decomposition certificate violates one of its invariants."""


def ell_1(Q) -> float:
    """Optimal value over 1-sparse simplex points: the minimum diagonal entry."""
    A = as_sym_matrix(Q)
    return float(np.min(np.diag(A)))


def ell_2(Q) -> float:
    """Optimal value over 2-sparse simplex points, in closed form.

    For each edge {i, j} whose restricted quadratic is strictly convex with an
    interior minimizer (Q_ij < min(Q_ii, Q_jj)), the edge minimum is
    (Q_ii Q_jj - Q_ij^2) / (Q_ii + Q_jj - 2 Q_ij); otherwise the edge minimum
    is attained at a vertex and already covered by ell_1.
    """
    A = as_sym_matrix(Q)
    n = A.shape[0]
    best = ell_1(A)
    for i in range(n):
        for j in range(i + 1, n):
            if A[i, j] < min(A[i, i], A[j, j]):
                val = (A[i, i] * A[j, j] - A[i, j] ** 2) / (
                    A[i, i] + A[j, j] - 2.0 * A[i, j]
                )
                best = min(best, float(val))
    return best


def ell_r1(Q) -> float:
    """Value of the lifted-LP relaxation of the unconstrained problem:
    the minimum matrix entry."""
    A = as_sym_matrix(Q)
    return float(np.min(A))


def ell_r1_rho(Q, rho: int) -> float:
    """Value of the lifted-LP relaxation under the cardinality constraint.

    Collapses to the minimum diagonal entry for rho = 1 and to the minimum
    matrix entry for every rho >= 2.
    """
    A = as_sym_matrix(Q)
    if not 1 <= rho <= A.shape[0]:
        raise DomainError(f"rho={rho} outside [1, {A.shape[0]}]")
    return ell_1(A) if rho == 1 else ell_r1(A)


def rlt_exact(Q, rho: int, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether the lifted-LP relaxation is exact at this sparsity level:
    always at rho = 1, otherwise iff the minimum entry sits on the diagonal."""
    A = as_sym_matrix(Q)
    if not 1 <= rho <= A.shape[0]:
        raise DomainError(f"rho={rho} outside [1, {A.shape[0]}]")
    return rho == 1 or min_diag_condition(A, tol)


def min_diag_condition(Q, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff the minimum entry of Q is attained on the diagonal, in which
    case every cardinality-restricted optimal value collapses to it."""
    A = as_sym_matrix(Q)
    scale = max(1.0, float(np.max(np.abs(A))))
    return abs(ell_r1(A) - ell_1(A)) <= tol.eq_tol * scale


def tau(rho: int, nu: int) -> float:
    """Pair-product threshold (rho-1)(rho-2) / ((nu-2)(nu-2*rho+1))."""
    if rho < 3 or nu < 2 * rho:
        raise DomainError(f"tau requires rho >= 3 and nu >= 2*rho, got ({rho}, {nu})")
    return (rho - 1) * (rho - 2) / ((nu - 2) * (nu - 2 * rho + 1))


def delta(rho: int, nu: int) -> float:
    """Pair-sum threshold 2*[sqrt(tau^2 + tau) - tau]."""
    t = tau(rho, nu)
    return 2.0 * (np.sqrt(t * t + t) - t)


@dataclass(frozen=True)
class GrhoParams:
    """Threshold data for the pair-product sufficient condition at (rho, nu)."""

    rho: int
    nu: int
    tau: float
    delta: float


def grho_params(rho: int, nu: int) -> GrhoParams:
    return GrhoParams(rho=rho, nu=nu, tau=tau(rho, nu), delta=delta(rho, nu))


def in_G_rho(x, rho: int, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Pair-product sufficient condition for rank-one lifted feasibility.

    True iff the support size nu exceeds 2*rho - 1 and every positive pair
    satisfies x_i x_j / (1 - x_i - x_j) <= (rho-1)(rho-2)/((nu-2)(nu-2rho+1)).
    Empty for rho = 2 (the threshold is zero).
    """
    v = as_vector(x)
    if not in_F(v, tol):
        raise DomainError("x is not on the standard simplex")
    n = v.size
    if not 2 <= rho <= n // 2:
        raise DomainError(f"rho={rho} outside [2, floor(n/2)] for n={n}")
    supp = support_of(v, tol).indices
    nu = len(supp)
    if nu <= 2 * rho - 1:
        return False
    bound = (rho - 1) * (rho - 2) / ((nu - 2) * (nu - 2 * rho + 1))
    max_ratio = 0.0
    for a in range(nu):
        for b in range(a + 1, nu):
            xi, xj = v[supp[a]], v[supp[b]]
            max_ratio = max(max_ratio, xi * xj / (1.0 - xi - xj))
    return max_ratio <= bound + tol.ineq_tol


def in_H_rho(x, rho: int, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Pair-sum inner approximation of the pair-product condition: the support
    size lies in [2*rho, n] and every pair sum is at most delta(rho, nu)."""
    v = as_vector(x)
    if not in_F(v, tol):
        raise DomainError("x is not on the standard simplex")
    n = v.size
    if not 3 <= rho <= n // 2:
        raise DomainError(f"rho={rho} outside [3, floor(n/2)] for n={n}")
    nu = support_of(v, tol).nu
    if not 2 * rho <= nu <= n:
        return False
    two_largest = float(np.sum(np.sort(v)[-2:]))
    return two_largest <= delta(rho, nu) + tol.ineq_tol


@dataclass(frozen=True)
class DecompositionCertificate:
    """Certificate Q = P + N + lambda*E of a known optimal value.

    x lies on the simplex, P is PSD with P x = 0, N is entrywise nonnegative
    with x'Nx = 0; then x is optimal for the assembled Q with value lambda.
    """

    x: np.ndarray
    P: np.ndarray
    N: np.ndarray
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "x", as_vector(self.x))
        object.__setattr__(self, "P", as_sym_matrix(self.P))
        object.__setattr__(self, "N", as_sym_matrix(self.N))


def validate_certificate(
    cert: DecompositionCertificate, tol: ToleranceConfig = DEFAULT_TOL
) -> None:
    """Raise CertificateInvalid naming the first violated certificate condition."""
    x, P, N = cert.x, cert.P, cert.N
    n = x.size
    if P.shape[0] != n or N.shape[0] != n:
        raise CertificateInvalid("P, N, x dimensions differ")
    if not in_F(x, tol):
        raise CertificateInvalid("x is not on the standard simplex")
    if min_eigenvalue(P) < -tol.psd_tol:
        raise CertificateInvalid("P is not positive semidefinite")
    scale = max(1.0, float(np.max(np.abs(P))))
    if float(np.max(np.abs(P @ x))) > tol.eq_tol * scale:
        raise CertificateInvalid("P x != 0")
    if float(np.min(N)) < -tol.ineq_tol:
        raise CertificateInvalid("N has negative entries")
    if abs(float(x @ N @ x)) > tol.eq_tol * max(1.0, float(np.max(np.abs(N)))):
        raise CertificateInvalid("x' N x != 0")


def build_exact_instance(
    cert: DecompositionCertificate, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[np.ndarray, float]:
    """Assemble Q = P + N + lambda*E from a validated certificate.

    Returns (Q, lambda); lambda is the optimal value of the unconstrained
    simplex problem, attained at cert.x, and also the optimal value at every
    sparsity level that admits cert.x.
    """
    validate_certificate(cert, tol)
    n = cert.x.size
    E = np.ones((n, n))
    Q = cert.P + cert.N + cert.lam * E
    return 0.5 * (Q + Q.T), float(cert.lam)
