"""Command-line interface: instance generation, bound comparison tables,
rank-one membership checks, witness construction, and property suites.

Exit codes: 0 success, 2 validation error, 3 solver failure, 4 property
violation (from verify-paper).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import closedform, instances, lift, oracle, relax
from .core import DEFAULT_TOL, DomainError, ExtendedLiftedPoint, ToleranceConfig, check_r3rho_feasible
from .instances import InvalidArgument

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_PROPERTY = 4


@dataclass
class BoundReportRow:
    rho: int
    ell_rho_oracle: float | None
    r1: float | None
    r2: float | str | None  # "unbounded" when the Shor relaxation diverges
    r3: float | None
    rlt_exact: bool | None
    shor_exact: bool | None
    r3_exact: bool | None
    wall_times_ms: dict[str, float] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "rho": self.rho,
            "ell_rho_oracle": self.ell_rho_oracle,
            "r1": self.r1,
            "r2": self.r2,
            "r3": self.r3,
            "rlt_exact": self.rlt_exact,
            "shor_exact": self.shor_exact,
            "r3_exact": self.r3_exact,
            "wall_times_ms": self.wall_times_ms,
            "errors": self.errors,
        }


def _timed_solve(model, tol):
    t0 = time.perf_counter()
    result = relax.solve(model, tol)
    return result, (time.perf_counter() - t0) * 1e3


def bounds_table(
    Q: np.ndarray,
    rho_list: list[int],
    tol: ToleranceConfig = DEFAULT_TOL,
    oracle_cap: int = oracle.DEFAULT_CAP,
) -> list[BoundReportRow]:
    """One row of relaxation values, exactness flags, and timings per rho."""
    rows = []
    for rho in sorted(rho_list):
        row = BoundReportRow(
            rho=rho, ell_rho_oracle=None, r1=None, r2=None, r3=None,
            rlt_exact=None, shor_exact=None, r3_exact=None,
        )
        try:
            res = oracle.solve_sparse_stqp_exact(Q, rho, cap=oracle_cap, tol=tol)
            row.ell_rho_oracle = res.value
        except oracle.CapExceeded:
            pass
        for name, model in (
            ("r1", relax.build_r1_rho(Q, rho)),
            ("r2", relax.build_r2_rho(Q, rho)),
            ("r3", relax.build_r3_rho(Q, rho)),
        ):
            result, ms = _timed_solve(model, tol)
            row.wall_times_ms[name] = round(ms, 3)
            if result.status == relax.OPTIMAL:
                setattr(row, name, result.value)
            elif result.status == relax.UNBOUNDED and name == "r2":
                row.r2 = "unbounded"
            else:
                row.errors.append(f"{name}: {result.status}")
        if row.ell_rho_oracle is not None:
            for name, flag in (("r1", "rlt_exact"), ("r2", "shor_exact"), ("r3", "r3_exact")):
                val = getattr(row, name)
                if isinstance(val, float):
                    setattr(row, flag, abs(val - row.ell_rho_oracle) <= 1e-6)
                elif val == "unbounded":
                    setattr(row, flag, False)
        rows.append(row)
    return rows


def _write_rows(rows: list[BoundReportRow], out, fmt: str) -> None:
    if fmt == "json":
        json.dump([r.to_dict() for r in rows], out, indent=1)
        out.write("\n")
    else:
        fieldnames = [
            "rho", "ell_rho_oracle", "r1", "r2", "r3",
            "rlt_exact", "shor_exact", "r3_exact", "wall_times_ms", "errors",
        ]
        writer = csv.DictWriter(out, fieldnames=fieldnames)
        writer.writeheader()
        for r in rows:
            d = r.to_dict()
            d["wall_times_ms"] = json.dumps(d["wall_times_ms"])
            d["errors"] = ";".join(d["errors"])
            writer.writerow(d)


def witness_to_dict(p: ExtendedLiftedPoint, rho: int) -> dict:
    return {
        "x": p.x.tolist(),
        "u": p.u.tolist(),
        "X": p.X.tolist(),
        "U": p.U.tolist(),
        "R": p.R.tolist(),
        "rho": rho,
    }


def _parse_x(arg: str) -> np.ndarray:
    return np.asarray(json.loads(arg), dtype=float)


def _load_x(args) -> np.ndarray:
    if args.x is not None:
        return _parse_x(args.x)
    inst = instances.load_instance(args.instance)
    raise InvalidArgument(
        f"instance {inst.label!r} carries no point; pass --x '[...]'"
    )


def cmd_gen(args) -> int:
    inst = instances.generate(args.n, args.dist, rho=args.rho, seed=args.seed)
    if args.out:
        instances.save_instance(inst, args.out)
    else:
        json.dump(inst.to_dict(), sys.stdout, indent=1)
        sys.stdout.write("\n")
    return EXIT_OK


def cmd_bounds(args) -> int:
    inst = instances.load_instance(args.instance)
    rho_list = (
        [int(r) for r in args.rho.split(",")]
        if args.rho
        else list(range(1, inst.n + 1))
    )
    tol = ToleranceConfig(eq_tol=args.tol, ineq_tol=args.tol, psd_tol=args.tol)
    rows = bounds_table(inst.Q, rho_list, tol=tol, oracle_cap=args.oracle_cap)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            _write_rows(rows, fh, args.format)
    else:
        _write_rows(rows, sys.stdout, args.format)
    hard = [e for r in rows for e in r.errors]
    return EXIT_SOLVER if hard else EXIT_OK


def cmd_check_rank_one(args) -> int:
    x = _load_x(args)
    verdict = lift.rank_one_membership(x, args.rho)
    print(f"status: {verdict.status}")
    print(f"reason: {verdict.reason}")
    if verdict.status == "member" and args.out:
        with open(args.out, "w") as fh:
            json.dump(witness_to_dict(verdict.witness, args.rho), fh, indent=1)
            fh.write("\n")
        print(f"witness written to {args.out}")
    return EXIT_OK


def cmd_witness(args) -> int:
    x = _parse_x(args.x)
    rho = args.rho
    if args.kind == "r1_rho1":
        p = lift.witness_r1_rho1(x)
        rho = 1
    elif args.kind == "r2":
        p = lift.witness_r2(x, np.zeros((x.size, x.size)), rho)
    elif args.kind == "binary_cover":
        p = lift.witness_binary_cover(x, np.outer(x, x), rho)
    elif args.kind == "general":
        p = lift.witness_general_construct(x, rho)
    elif args.kind == "lift_step":
        base = lift.witness_general_construct(x, rho)
        p = lift.lift_sparsity_step(base, rho)
        rho = rho + 1
    else:
        raise InvalidArgument(f"unknown witness kind {args.kind!r}")
    report = check_r3rho_feasible(p, rho)
    print(f"feasible (combined relaxation, rho={rho}): {report.feasible}")
    for name, resid in report.violations:
        print(f"  violated: {name} (residual {resid:.3e})")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(witness_to_dict(p, rho), fh, indent=1)
            fh.write("\n")
    return EXIT_OK


# --- verify-paper suites -----------------------------------------------------

def _suite_rlt(count: int = 100) -> tuple[int, int]:
    """LP value of the lifted RLT relaxation collapses to a closed form."""
    passed = 0
    for i in range(count):
        n = 3 + i % 6
        dist = "uniform" if i % 2 == 0 else "gaussian"
        Q = instances.generate(n, dist, seed=1000 + i).Q
        ok = True
        for rho in range(1, n + 1):
            result = relax.solve(relax.build_r1_rho(Q, rho))
            expect = closedform.ell_r1_rho(Q, rho)
            ok &= result.status == relax.OPTIMAL and abs(result.value - expect) <= 1e-7
        passed += ok
    return passed, count


def _suite_shor(count: int = 50) -> tuple[int, int]:
    """Shor relaxation value does not depend on the sparsity level."""
    passed = 0
    for i in range(count):
        n = 3 + i % 4
        Q = instances.gen_psd(n, seed=2000 + i)
        base = relax.solve(relax.build_r2(Q))
        ok = base.status == relax.OPTIMAL
        for rho in range(1, n + 1):
            result = relax.solve(relax.build_r2_rho(Q, rho))
            ok &= result.status == relax.OPTIMAL and abs(result.value - base.value) <= 1e-6
        passed += ok
    return passed, count


def _suite_sdprlt(count: int = 30) -> tuple[int, int]:
    """Sandwich max(r1, r2) <= r3 <= oracle, plus the 2*rho-1 quality cap."""
    passed = 0
    for i in range(count):
        n = 4 + i % 3
        Q = instances.gen_psd(n, seed=3000 + i)
        chain = oracle.bound_chain(Q)
        ok = True
        for rho in range(1, n + 1):
            r1 = relax.solve(relax.build_r1_rho(Q, rho))
            r2 = relax.solve(relax.build_r2_rho(Q, rho))
            r3 = relax.solve(relax.build_r3_rho(Q, rho))
            if relax.OPTIMAL not in (r1.status, r2.status, r3.status):
                ok = False
                continue
            lo = max(r1.value, r2.value)
            ok &= lo - 1e-6 <= r3.value <= chain[rho - 1] + 1e-6
            if 2 <= rho <= (n + 1) // 2:
                ok &= r3.value <= chain[2 * rho - 2] + 1e-6
        passed += ok
    return passed, count


def _suite_rankone(count: int = 50) -> tuple[int, int]:
    """Membership is monotone in the sparsity level."""
    rng = np.random.default_rng(4000)
    passed = 0
    for _ in range(count):
        n = 6
        nu = int(rng.integers(1, n + 1))
        x = np.zeros(n)
        supp = np.sort(rng.choice(n, size=nu, replace=False))
        x[supp] = rng.uniform(0.2, 1.0, size=nu)
        x /= x.sum()
        statuses = [lift.rank_one_membership(x, rho).status for rho in range(1, n + 1)]
        ok = True
        for a, b in zip(statuses, statuses[1:]):
            if a == "member" and b == "non_member":
                ok = False
        passed += ok
    return passed, count


SUITES = {
    "rlt": _suite_rlt,
    "shor": _suite_shor,
    "sdprlt": _suite_sdprlt,
    "rankone": _suite_rankone,
}


def cmd_verify_paper(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failed = False
    for name in names:
        passed, total = SUITES[name]()
        print(f"{name}: {passed}/{total} passed")
        failed |= passed != total
    return EXIT_PROPERTY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsestqp",
        description="Sparse simplex-QP relaxations: bounds, witnesses, checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dist", choices=["uniform", "gaussian", "psd", "structured"], required=True)
    p.add_argument("--rho", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bounds", help="relaxation bound table for an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--rho", default=None, help="comma-separated list, default 1..n")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--oracle-cap", type=int, default=oracle.DEFAULT_CAP)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("check-rank-one", help="rank-one membership of (x, xx')")
    p.add_argument("--x", default=None, help="JSON list, e.g. '[0.5,0.5,0]'")
    p.add_argument("--instance", default=None)
    p.add_argument("--rho", type=int, required=True)
    p.add_argument("--out", default=None, help="witness JSON path")
    p.set_defaults(func=cmd_check_rank_one)

    p = sub.add_parser("witness", help="build a lifted witness and check it")
    p.add_argument("--x", required=True, help="JSON list")
    p.add_argument("--rho", type=int, required=True)
    p.add_argument("--kind", choices=["r1_rho1", "r2", "binary_cover", "general", "lift_step"], required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify-paper", help="run seeded property suites")
    p.add_argument("--suite", choices=["all", *SUITES], default="all")
    p.set_defaults(func=cmd_verify_paper)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, InvalidArgument, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
