"""Builders for the six lifted relaxations and a narrow solver contract.

Models are described declaratively (named variable blocks, one linear
objective, named constraint lists) and compiled to cvxpy on solve. Models
without PSD blocks are dispatched to an LP backend; PSD models go to a
conic interior-point backend.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Any

import cvxpy as cp
import numpy as np

from .core import DEFAULT_TOL, DomainError, ToleranceConfig, as_sym_matrix, as_vector, in_F

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"
NUMERICAL_FAILURE = "numerical_failure"

LP_SOLVERS = ("SCIPY", "GLPK")
SDP_SOLVERS = ("CLARABEL", "SCS", "CVXOPT")

# SCS defaults to eps = 1e-4, which is too loose for the bound comparisons we
# make at 1e-6; CLARABEL's defaults are already tight.
_SOLVER_OPTIONS: dict[str, dict[str, Any]] = {
    "SCS": {"eps": 1e-9, "max_iters": 100_000},
}


@dataclass
class ConicModel:
    """A minimization model over named scalar/vector/matrix blocks.

    eq_constraints / ineq_constraints / psd_blocks hold (name, constraint)
    pairs; constraints are cvxpy expressions over the declared variables.
    """

    name: str
    variables: dict[str, cp.Variable]
    objective: Any
    eq_constraints: list[tuple[str, Any]] = field(default_factory=list)
    ineq_constraints: list[tuple[str, Any]] = field(default_factory=list)
    psd_blocks: list[tuple[str, Any]] = field(default_factory=list)

    @property
    def is_lp(self) -> bool:
        return not self.psd_blocks

    def all_constraints(self):
        return [c for _, c in self.eq_constraints + self.ineq_constraints + self.psd_blocks]


@dataclass
class SolveResult:
    """Classified solver outcome. value/point are present only when optimal."""

    status: str
    value: float | None = None
    point: dict[str, np.ndarray] | None = None
    solver_stats: dict[str, Any] = field(default_factory=dict)


def dump_model(model: ConicModel) -> str:
    """Plain-text rendering of a model for cross-checking with other solvers.

    One line per variable block (name, shape) and per constraint
    (kind, name, cvxpy expression).
    """
    lines = [f"model {model.name}", "minimize " + str(model.objective)]
    for name, var in model.variables.items():
        lines.append(f"var {name} shape={tuple(var.shape)}")
    for kind, group in (
        ("eq", model.eq_constraints),
        ("ineq", model.ineq_constraints),
        ("psd", model.psd_blocks),
    ):
        for name, con in group:
            lines.append(f"{kind} [{name}] {con}")
    return "\n".join(lines) + "\n"


def _lifted_blocks(n: int):
    x = cp.Variable(n, name="x")
    u = cp.Variable(n, name="u")
    X = cp.Variable((n, n), name="X", symmetric=True)
    U = cp.Variable((n, n), name="U", symmetric=True)
    R = cp.Variable((n, n), name="R")
    return x, u, X, U, R


def _rlt_constraints(x, u, X, U, R, rho, n):
    """The full linear constraint list of the lifted RLT formulation,
    including the redundant families, for one-to-one auditability."""
    e = np.ones(n)
    eqs = [
        ("e'x = 1", cp.sum(x) == 1),
        ("e'u = rho", cp.sum(u) == rho),
        ("diag(U) = u", cp.diag(U) == u),
        ("Xe = x", X @ e == x),
        ("R'e = u", R.T @ e == u),
        ("Re = rho*x", R @ e == rho * x),
        ("Ue = rho*u", U @ e == rho * u),
    ]
    ineqs = [
        ("x <= u", x <= u),
        ("x >= 0", x >= 0),
        ("X - R' - R + U >= 0", X - R.T - R + U >= 0),
        ("X - R' <= 0", X - R.T <= 0),
        ("R - U <= 0", R - U <= 0),
        ("X >= 0", X >= 0),
        ("R >= 0", R >= 0),
        ("U >= 0", U >= 0),
    ]
    return eqs, ineqs


def _moment_block(x, u, X, U, R):
    return cp.bmat(
        [
            [np.ones((1, 1)), cp.reshape(x, (1, -1), order="C"), cp.reshape(u, (1, -1), order="C")],
            [cp.reshape(x, (-1, 1), order="C"), X, R],
            [cp.reshape(u, (-1, 1), order="C"), R.T, U],
        ]
    )


def build_r1(Q) -> ConicModel:
    """Lifted LP relaxation of the unconstrained simplex QP."""
    A = as_sym_matrix(Q)
    n = A.shape[0]
    e = np.ones(n)
    x = cp.Variable(n, name="x")
    X = cp.Variable((n, n), name="X", symmetric=True)
    return ConicModel(
        name="R1",
        variables={"x": x, "X": X},
        objective=cp.sum(cp.multiply(A, X)),
        eq_constraints=[("e'x = 1", cp.sum(x) == 1), ("Xe = x", X @ e == x)],
        ineq_constraints=[("x >= 0", x >= 0), ("X >= 0", X >= 0)],
    )


def build_r1_rho(Q, rho: int) -> ConicModel:
    """Lifted LP relaxation of the cardinality-constrained problem."""
    A = as_sym_matrix(Q)
    n = A.shape[0]
    if not 1 <= rho <= n:
        raise DomainError(f"rho={rho} outside [1, {n}]")
    x, u, X, U, R = _lifted_blocks(n)
    eqs, ineqs = _rlt_constraints(x, u, X, U, R, rho, n)
    return ConicModel(
        name=f"R1({rho})",
        variables={"x": x, "u": u, "X": X, "U": U, "R": R},
        objective=cp.sum(cp.multiply(A, X)),
        eq_constraints=eqs,
        ineq_constraints=ineqs,
    )


def build_r2(Q) -> ConicModel:
    """Shor SDP relaxation of the unconstrained simplex QP."""
    A = as_sym_matrix(Q)
    n = A.shape[0]
    x = cp.Variable(n, name="x")
    X = cp.Variable((n, n), name="X", symmetric=True)
    block = cp.bmat(
        [
            [np.ones((1, 1)), cp.reshape(x, (1, -1), order="C")],
            [cp.reshape(x, (-1, 1), order="C"), X],
        ]
    )
    return ConicModel(
        name="R2",
        variables={"x": x, "X": X},
        objective=cp.sum(cp.multiply(A, X)),
        eq_constraints=[("e'x = 1", cp.sum(x) == 1)],
        ineq_constraints=[("x >= 0", x >= 0)],
        psd_blocks=[("[[1,x'],[x,X]] >> 0", block >> 0)],
    )


def build_r2_rho(Q, rho: int) -> ConicModel:
    """Shor SDP relaxation of the cardinality-constrained problem."""
    A = as_sym_matrix(Q)
    n = A.shape[0]
    if not 1 <= rho <= n:
        raise DomainError(f"rho={rho} outside [1, {n}]")
    x, u, X, U, R = _lifted_blocks(n)
    return ConicModel(
        name=f"R2({rho})",
        variables={"x": x, "u": u, "X": X, "U": U, "R": R},
        objective=cp.sum(cp.multiply(A, X)),
        eq_constraints=[
            ("e'x = 1", cp.sum(x) == 1),
            ("e'u = rho", cp.sum(u) == rho),
            ("diag(U) = u", cp.diag(U) == u),
        ],
        ineq_constraints=[("x >= 0", x >= 0), ("x <= u", x <= u)],
        psd_blocks=[("moment block >> 0", _moment_block(x, u, X, U, R) >> 0)],
    )


def build_r3(Q) -> ConicModel:
    """Doubly-nonnegative-style SDP relaxation of the unconstrained problem."""
    model = build_r1(Q)
    x, X = model.variables["x"], model.variables["X"]
    block = cp.bmat(
        [
            [np.ones((1, 1)), cp.reshape(x, (1, -1), order="C")],
            [cp.reshape(x, (-1, 1), order="C"), X],
        ]
    )
    model.name = "R3"
    model.psd_blocks = [("[[1,x'],[x,X]] >> 0", block >> 0)]
    return model


def build_r3_rho(Q, rho: int) -> ConicModel:
    """Combined RLT + Shor relaxation of the cardinality-constrained problem."""
    model = build_r1_rho(Q, rho)
    v = model.variables
    model.name = f"R3({rho})"
    model.psd_blocks = [
        ("moment block >> 0", _moment_block(v["x"], v["u"], v["X"], v["U"], v["R"]) >> 0)
    ]
    return model


def _classify(problem: cp.Problem) -> str:
    status = problem.status
    if status == cp.OPTIMAL:
        return OPTIMAL
    if status == cp.UNBOUNDED:
        return UNBOUNDED
    if status == cp.INFEASIBLE:
        return INFEASIBLE
    return NUMERICAL_FAILURE


def solve(model: ConicModel, tol: ToleranceConfig = DEFAULT_TOL) -> SolveResult:
    """Solve a model and classify the outcome; solver breakdown is reported as
    a numerical_failure status, never raised."""
    problem = cp.Problem(cp.Minimize(model.objective), model.all_constraints())
    solvers = LP_SOLVERS if model.is_lp else SDP_SOLVERS
    last_stats: dict[str, Any] = {}
    last_result: SolveResult | None = None
    for solver in solvers:
        try:
            with warnings.catch_warnings():
                # inaccurate-solution warnings duplicate the status we already
                # classify and act on below
                warnings.simplefilter("ignore", UserWarning)
                problem.solve(solver=solver, **_SOLVER_OPTIONS.get(solver, {}))
        except Exception:  # noqa: BLE001 - contract: never raise on solver breakdown
            continue
        stats = {"solver": solver, "status_raw": problem.status}
        if problem.solver_stats is not None:
            stats["solve_time"] = problem.solver_stats.solve_time
            stats["num_iters"] = problem.solver_stats.num_iters
        last_stats = stats
        status = _classify(problem)
        if status == NUMERICAL_FAILURE:
            # Keep an inaccurate candidate point: a caller with an independent
            # feasibility check may still be able to certify it.
            if problem.status == "optimal_inaccurate" and all(
                var.value is not None for var in model.variables.values()
            ):
                last_stats = stats
                last_point = {
                    name: np.array(var.value, dtype=float)
                    for name, var in model.variables.items()
                }
                last_result = SolveResult(
                    status=NUMERICAL_FAILURE,
                    value=None,
                    point=last_point,
                    solver_stats=stats,
                )
            continue
        if status != OPTIMAL:
            return SolveResult(status=status, solver_stats=stats)
        point = {
            name: np.array(var.value, dtype=float)
            for name, var in model.variables.items()
        }
        return SolveResult(
            status=OPTIMAL,
            value=float(problem.value),
            point=point,
            solver_stats=stats,
        )
    if last_result is not None:
        return last_result
    return SolveResult(status=NUMERICAL_FAILURE, solver_stats=last_stats)


def feasibility_probe_rank_one(
    x, rho: int, tol: ToleranceConfig = DEFAULT_TOL
) -> SolveResult:
    """Zero-objective feasibility SDP: fix x and X = xx' in the combined
    relaxation and search over the remaining blocks (u, U, R)."""
    v = as_vector(x)
    if not in_F(v, tol):
        raise DomainError("x is not on the standard simplex")
    n = v.size
    if not 1 <= rho <= n:
        raise DomainError(f"rho={rho} outside [1, {n}]")
    Xc = np.outer(v, v)
    e = np.ones(n)
    u = cp.Variable(n, name="u")
    U = cp.Variable((n, n), name="U", symmetric=True)
    # With X = xx' fixed, the (2n+1) moment block is PSD iff R = xu' and
    # U >> uu' (the X - xx' Schur block is zero, which forces the off-diagonal
    # block R - xu' to vanish). Substituting R = xu' keeps the model exactly
    # equivalent while avoiding the structurally singular large block.
    R = cp.outer(v, u)
    eqs = [
        ("e'u = rho", cp.sum(u) == rho),
        ("diag(U) = u", cp.diag(U) == u),
        ("Ue = rho*u", U @ e == rho * u),
    ]
    ineqs = [
        ("x <= u", v <= u),
        ("X - R' - R + U >= 0", Xc - R.T - R + U >= 0),
        ("X - R' <= 0", Xc - R.T <= 0),
        ("R - U <= 0", R - U <= 0),
        ("R >= 0", R >= 0),
        ("U >= 0", U >= 0),
    ]
    block = cp.bmat(
        [
            [np.ones((1, 1)), cp.reshape(u, (1, -1), order="C")],
            [cp.reshape(u, (-1, 1), order="C"), U],
        ]
    )
    model = ConicModel(
        name=f"rank-one probe rho={rho}",
        variables={"u": u, "U": U},
        objective=cp.Constant(0.0),
        eq_constraints=eqs,
        ineq_constraints=ineqs,
        psd_blocks=[("[[1,u'],[u,U]] >> 0", block >> 0)],
    )
    result = solve(model, tol)
    if result.point is not None and "R" not in result.point:
        result.point["R"] = np.outer(v, result.point["u"])
    if result.status == NUMERICAL_FAILURE and result.point is not None:
        # An inaccurate solver run can still hand back a certifiable point
        # (common when the feasible set is a single tuple); re-check it
        # against the exhaustive checker before trusting it.
        from .core import ExtendedLiftedPoint, check_r3rho_feasible

        candidate = ExtendedLiftedPoint(
            x=v,
            u=result.point["u"],
            X=Xc,
            U=0.5 * (result.point["U"] + result.point["U"].T),
            R=result.point["R"],
        )
        loose = ToleranceConfig(eq_tol=1e-5, ineq_tol=1e-5, psd_tol=1e-5)
        if check_r3rho_feasible(candidate, rho, loose).feasible:
            return SolveResult(
                status=OPTIMAL, value=0.0, point=result.point,
                solver_stats=result.solver_stats,
            )
    return result
