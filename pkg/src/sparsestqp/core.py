"""Domain types, simplex/support arithmetic, and exhaustive feasibility checkers.

Everything here is a pure function over immutable inputs; all tolerances are
carried explicitly in a ToleranceConfig so that checkers can be tightened or
relaxed per call site.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class DimensionMismatch(ValueError):
    """Operands do not share a consistent dimension n."""


class DomainError(ValueError):
    """Input violates a mathematical precondition (e.g. x not on the simplex)."""


class NonFinite(ValueError):
    """Input contains NaN or infinite entries."""


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances used by all feasibility and membership checks.

    eq_tol      -- allowed residual on scalar/vector equalities
    ineq_tol    -- allowed violation of componentwise inequalities
    psd_tol     -- allowed magnitude of a negative eigenvalue in PSD checks
    support_tol -- zero threshold when counting nonzero components
    """

    eq_tol: float = 1e-7
    ineq_tol: float = 1e-7
    psd_tol: float = 1e-7
    support_tol: float = 1e-9

    def __post_init__(self):
        for name in ("eq_tol", "ineq_tol", "psd_tol", "support_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOL = ToleranceConfig()


def as_vector(x) -> np.ndarray:
    """Validate and return a finite 1-d float array."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise DimensionMismatch(f"expected a nonempty vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFinite("vector has non-finite entries")
    return v


def as_sym_matrix(M, sym_tol: float = 1e-9) -> np.ndarray:
    """Validate a square finite matrix and return its symmetric part.

    Asymmetry beyond sym_tol (relative to the Frobenius norm) is an error;
    tiny asymmetry is mirrored away.
    """
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFinite("matrix has non-finite entries")
    scale = max(np.linalg.norm(A), 1.0)
    if np.linalg.norm(A - A.T) > sym_tol * scale:
        raise DomainError("matrix is not symmetric")
    return 0.5 * (A + A.T)


def as_square_matrix(M) -> np.ndarray:
    """Validate a square finite matrix (no symmetry requirement)."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFinite("matrix has non-finite entries")
    return A


@dataclass(frozen=True)
class Support:
    """Index set of the nonzero components of a vector."""

    indices: tuple[int, ...]

    def __post_init__(self):
        if list(self.indices) != sorted(set(self.indices)):
            raise ValueError("support indices must be strictly increasing")

    @property
    def nu(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class SparseStqpInstance:
    """A sparsity-constrained simplex QP: minimize x'Qx over the simplex with
    at most rho nonzero components."""

    Q: np.ndarray
    rho: int
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "Q", as_sym_matrix(self.Q))
        if not 1 <= self.rho <= self.n:
            raise DomainError(f"rho={self.rho} outside [1, {self.n}]")

    @property
    def n(self) -> int:
        return self.Q.shape[0]


@dataclass(frozen=True)
class LiftedPoint:
    """A point (x, X) in the projected lifted space."""

    x: np.ndarray
    X: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", as_vector(self.x))
        object.__setattr__(self, "X", as_sym_matrix(self.X))
        if self.X.shape[0] != self.x.size:
            raise DimensionMismatch("x and X dimensions differ")


@dataclass(frozen=True)
class ExtendedLiftedPoint:
    """Full lifted variable tuple (x, u, X, U, R).

    X and U are symmetric; R is a general square matrix.
    """

    x: np.ndarray
    u: np.ndarray
    X: np.ndarray
    U: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", as_vector(self.x))
        object.__setattr__(self, "u", as_vector(self.u))
        object.__setattr__(self, "X", as_sym_matrix(self.X))
        object.__setattr__(self, "U", as_sym_matrix(self.U))
        object.__setattr__(self, "R", as_square_matrix(self.R))
        n = self.x.size
        for name in ("u", "X", "U", "R"):
            if getattr(self, name).shape[0] != n:
                raise DimensionMismatch(f"{name} does not have dimension {n}")

    @property
    def n(self) -> int:
        return self.x.size


@dataclass
class FeasibilityReport:
    """Outcome of a constraint-by-constraint feasibility check.

    violations lists every violated constraint with its worst residual;
    feasible is true iff the list is empty.
    """

    feasible: bool
    violations: list[tuple[str, float]] = field(default_factory=list)
    min_psd_eigenvalue: float | None = None

    def violated(self, name: str) -> bool:
        return any(v[0] == name for v in self.violations)


def support_of(x, tol: ToleranceConfig = DEFAULT_TOL) -> Support:
    """Indices with |x_i| above the zero threshold."""
    v = as_vector(x)
    idx = np.flatnonzero(np.abs(v) > tol.support_tol)
    return Support(tuple(int(i) for i in idx))


def in_F(x, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Membership in the standard simplex {x >= 0, sum(x) = 1}."""
    v = as_vector(x)
    return abs(v.sum() - 1.0) <= tol.eq_tol and np.min(v) >= -tol.ineq_tol


def in_F_rho(x, rho: int, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Membership in the simplex restricted to at most rho nonzero components."""
    v = as_vector(x)
    if not 1 <= rho <= v.size:
        raise DomainError(f"rho={rho} outside [1, {v.size}]")
    return in_F(v, tol) and support_of(v, tol).nu <= rho


def min_eigenvalue(M) -> float:
    """Smallest eigenvalue of a symmetric matrix."""
    A = as_sym_matrix(M)
    return float(np.linalg.eigvalsh(A)[0])


def _linear_residuals(p: ExtendedLiftedPoint, rho: int, tol: ToleranceConfig):
    """Residuals of every linear constraint family shared by the lifted
    LP / SDP-LP formulations. Yields (name, residual, violated)."""
    x, u, X, U, R = p.x, p.u, p.X, p.U, p.R
    n = p.n
    e = np.ones(n)

    def eq(name, resid):
        r = float(np.max(np.abs(resid)))
        return name, r, r > tol.eq_tol

    def ge0(name, expr):
        r = float(-np.min(expr)) if np.size(expr) else 0.0
        return name, max(r, 0.0), r > tol.ineq_tol

    yield eq("e'x = 1", x.sum() - 1.0)
    yield eq("e'u = rho", u.sum() - rho)
    yield ge0("u - x >= 0", u - x)
    yield ge0("x >= 0", x)
    yield eq("diag(U) = u", np.diag(U) - u)
    yield eq("Xe = x", X @ e - x)
    yield eq("R'e = u", R.T @ e - u)
    yield eq("Re = rho*x", R @ e - rho * x)
    yield eq("Ue = rho*u", U @ e - rho * u)
    yield ge0("X - R' - R + U >= 0", X - R.T - R + U)
    yield ge0("R' - X >= 0", R.T - X)
    yield ge0("U - R >= 0", U - R)
    yield ge0("X >= 0", X)
    yield ge0("R >= 0", R)
    yield ge0("U >= 0", U)


def _psd_block(p: ExtendedLiftedPoint) -> np.ndarray:
    """The (2n+1) x (2n+1) moment block [[1, x', u'], [x, X, R], [u, R', U]]."""
    x = p.x.reshape(-1, 1)
    u = p.u.reshape(-1, 1)
    top = np.hstack([[[1.0]], x.T, u.T])
    mid = np.hstack([x, p.X, p.R])
    bot = np.hstack([u, p.R.T, p.U])
    B = np.vstack([top, mid, bot])
    return 0.5 * (B + B.T)


def check_r1rho_feasible(
    p: ExtendedLiftedPoint, rho: int, tol: ToleranceConfig = DEFAULT_TOL
) -> FeasibilityReport:
    """Check every linear constraint of the lifted RLT formulation."""
    violations = [
        (name, r) for name, r, bad in _linear_residuals(p, rho, tol) if bad
    ]
    return FeasibilityReport(feasible=not violations, violations=violations)


def check_r2rho_feasible(
    p: ExtendedLiftedPoint, rho: int, tol: ToleranceConfig = DEFAULT_TOL
) -> FeasibilityReport:
    """Check the Shor-style constraints: simplex/cardinality equalities,
    diag(U) = u, 0 <= x <= u, and the (2n+1) moment block PSD."""
    x, u, U = p.x, p.u, p.U
    violations = []

    def add_eq(name, resid):
        r = float(np.max(np.abs(resid)))
        if r > tol.eq_tol:
            violations.append((name, r))

    def add_ge0(name, expr):
        r = float(-np.min(expr))
        if r > tol.ineq_tol:
            violations.append((name, r))

    add_eq("e'x = 1", x.sum() - 1.0)
    add_eq("e'u = rho", u.sum() - rho)
    add_eq("diag(U) = u", np.diag(U) - u)
    add_ge0("x >= 0", x)
    add_ge0("u - x >= 0", u - x)

    lam = min_eigenvalue(_psd_block(p))
    if lam < -tol.psd_tol:
        violations.append(("moment block PSD", -lam))
    return FeasibilityReport(
        feasible=not violations, violations=violations, min_psd_eigenvalue=lam
    )


def check_r3rho_feasible(
    p: ExtendedLiftedPoint, rho: int, tol: ToleranceConfig = DEFAULT_TOL
) -> FeasibilityReport:
    """Conjunction of the lifted RLT linear constraints and the PSD moment
    block, merged into a single report."""
    violations = [
        (name, r) for name, r, bad in _linear_residuals(p, rho, tol) if bad
    ]
    lam = min_eigenvalue(_psd_block(p))
    if lam < -tol.psd_tol:
        violations.append(("moment block PSD", -lam))
    return FeasibilityReport(
        feasible=not violations, violations=violations, min_psd_eigenvalue=lam
    )
