"""Exact desk-scale reference solver by enumeration of simplex faces.

Every face of the simplex is identified with a support set K. A minimizer in
the relative interior of face K solves the equality-KKT system
[2*Q_K, e; e', 0] (x_K, mu) = (0, 1). Candidates with a singular system are
skipped: along the corresponding critical affine set the objective is
constant, so value-equivalent candidates are recovered on subfaces (and the
vertices |K| = 1 are always enumerated).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .core import DEFAULT_TOL, DomainError, Support, ToleranceConfig, as_sym_matrix


class CapExceeded(ValueError):
    """Enumeration budget would be exceeded for this (n, rho)."""


DEFAULT_CAP = 16
MAX_SUPPORTS = 2**16


@dataclass(frozen=True)
class Candidate:
    """A face-interior KKT point (or vertex) with its objective value."""

    support: Support
    point: np.ndarray
    value: float


@dataclass(frozen=True)
class OracleResult:
    value: float
    minimizer: np.ndarray
    candidates_examined: int


def _face_candidate(Q: np.ndarray, K: tuple[int, ...], support_tol: float):
    """Solve the equality-KKT system on face K; return a Candidate when the
    system is nonsingular and the solution is strictly positive."""
    k = len(K)
    n = Q.shape[0]
    idx = list(K)
    if k == 1:
        x = np.zeros(n)
        x[idx[0]] = 1.0
        return Candidate(Support(K), x, float(Q[idx[0], idx[0]]))
    A = np.zeros((k + 1, k + 1))
    A[:k, :k] = 2.0 * Q[np.ix_(idx, idx)]
    A[:k, k] = 1.0
    A[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    try:
        sol = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError:
        return None
    # Guard against numerically near-singular systems that solve() accepts.
    if not np.all(np.isfinite(sol)) or np.max(np.abs(sol)) > 1e12:
        return None
    xk = sol[:k]
    if np.min(xk) <= support_tol:
        return None
    x = np.zeros(n)
    x[idx] = xk
    return Candidate(Support(K), x, float(xk @ Q[np.ix_(idx, idx)] @ xk))


def _support_budget(n: int, rho: int, cap: int) -> None:
    total = sum(comb(n, k) for k in range(1, rho + 1))
    if total > min(2**cap, MAX_SUPPORTS):
        raise CapExceeded(
            f"{total} supports for n={n}, rho={rho} exceeds the enumeration cap"
        )


def _better(cand: Candidate, best: Candidate | None) -> bool:
    """Deterministic tie-break: smaller value, then lexicographically smaller
    support, then lexicographically smaller point."""
    if best is None:
        return True
    if cand.value < best.value - 1e-12:
        return True
    if cand.value > best.value + 1e-12:
        return False
    key = (cand.support.indices, tuple(cand.point))
    return key < (best.support.indices, tuple(best.point))


def _enumerate(Q: np.ndarray, rho: int, tol: ToleranceConfig):
    """Yield (size, candidate) by increasing support size."""
    n = Q.shape[0]
    for k in range(1, rho + 1):
        for K in combinations(range(n), k):
            cand = _face_candidate(Q, K, tol.support_tol)
            if cand is not None:
                yield k, cand


def solve_sparse_stqp_exact(
    Q, rho: int, cap: int = DEFAULT_CAP, tol: ToleranceConfig = DEFAULT_TOL
) -> OracleResult:
    """Exact optimal value over simplex points with at most rho nonzeros."""
    A = as_sym_matrix(Q)
    n = A.shape[0]
    if not 1 <= rho <= n:
        raise DomainError(f"rho={rho} outside [1, {n}]")
    _support_budget(n, rho, cap)
    best: Candidate | None = None
    examined = 0
    for _, cand in _enumerate(A, rho, tol):
        examined += 1
        if _better(cand, best):
            best = cand
    assert best is not None  # vertices always qualify
    return OracleResult(best.value, best.point, examined)


def solve_stqp_exact(
    Q, cap: int = DEFAULT_CAP, tol: ToleranceConfig = DEFAULT_TOL
) -> OracleResult:
    """Exact optimal value of the unconstrained simplex QP."""
    A = as_sym_matrix(Q)
    return solve_sparse_stqp_exact(A, A.shape[0], cap=cap, tol=tol)


def bound_chain(
    Q, cap: int = DEFAULT_CAP, tol: ToleranceConfig = DEFAULT_TOL
) -> list[float]:
    """The nonincreasing sequence [l_1(Q), ..., l_n(Q)] in a single pass over
    supports ordered by increasing size."""
    A = as_sym_matrix(Q)
    n = A.shape[0]
    _support_budget(n, n, cap)
    best_by_size = [np.inf] * (n + 1)
    for k, cand in _enumerate(A, n, tol):
        best_by_size[k] = min(best_by_size[k], cand.value)
    chain = []
    running = np.inf
    for k in range(1, n + 1):
        running = min(running, best_by_size[k])
        chain.append(float(running))
    return chain
