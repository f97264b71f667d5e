"""Sparse simplex quadratic programs and their lifted convex relaxations.

Subpackages:
  core       -- domain types, simplex/support arithmetic, feasibility checkers
  closedform -- closed-form bounds, exactness predicates, sufficient-condition sets
  lift       -- constructive lifted witnesses and rank-one membership
  relax      -- LP/SDP model builders and the solver contract
  oracle     -- exact enumeration reference solver
  instances  -- instance files and seeded generators
  cli        -- command-line entry point
"""

from .core import (
    DEFAULT_TOL,
    ExtendedLiftedPoint,
    FeasibilityReport,
    LiftedPoint,
    SparseStqpInstance,
    Support,
    ToleranceConfig,
)

__all__ = [
    "DEFAULT_TOL",
    "ExtendedLiftedPoint",
    "FeasibilityReport",
    "LiftedPoint",
    "SparseStqpInstance",
    "Support",
    "ToleranceConfig",
]

__version__ = "0.1.0"
