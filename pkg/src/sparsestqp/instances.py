"""Instance files: JSON schema, loading/saving, and seeded generators.

Generation is fully determined by (dist, n, rho, seed) via numpy's PCG64
generator so that instances are reproducible across runs and ports:
uniform/gaussian draw the upper triangle row by row (i <= j) and mirror;
structured assembles Q = P + N + lambda*E around a sampled sparse optimum.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .closedform import DecompositionCertificate, build_exact_instance
from .core import DomainError, as_sym_matrix


class InvalidArgument(ValueError):
    """Bad generator or file argument."""


SYMMETRY_WARN_TOL = 1e-12


@dataclass
class InstanceFile:
    """On-disk instance description (JSON)."""

    Q: np.ndarray
    rho: int | None = None
    label: str | None = None
    seed: int | None = None
    known_value: float | None = None

    def __post_init__(self):
        self.Q = as_sym_matrix(self.Q)

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    def to_dict(self) -> dict:
        d = {"n": self.n, "Q": self.Q.tolist()}
        for key in ("rho", "label", "seed", "known_value"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        return d


def save_instance(inst: InstanceFile, path) -> None:
    with open(path, "w") as fh:
        json.dump(inst.to_dict(), fh, indent=1)
        fh.write("\n")


def load_instance(path) -> InstanceFile:
    with open(path) as fh:
        d = json.load(fh)
    Q = np.asarray(d["Q"], dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or Q.shape[0] != d["n"]:
        raise InvalidArgument(f"Q shape {Q.shape} inconsistent with n={d.get('n')}")
    asym = float(np.max(np.abs(Q - Q.T))) if Q.size else 0.0
    if asym > SYMMETRY_WARN_TOL:
        import warnings

        warnings.warn(f"symmetrizing Q with asymmetry {asym:.3e}", stacklevel=2)
    return InstanceFile(
        Q=0.5 * (Q + Q.T),
        rho=d.get("rho"),
        label=d.get("label"),
        seed=d.get("seed"),
        known_value=d.get("known_value"),
    )


def _mirror_upper(rng: np.random.Generator, n: int, draw) -> np.ndarray:
    Q = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            Q[i, j] = Q[j, i] = draw(rng)
    return Q


def gen_uniform(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return _mirror_upper(rng, n, lambda r: r.uniform(0.0, 1.0))


def gen_gaussian(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return _mirror_upper(rng, n, lambda r: r.standard_normal())


def gen_psd(n: int, seed: int) -> np.ndarray:
    """Random PSD matrix B B' with iid standard normal B (n x n)."""
    rng = np.random.default_rng(seed)
    B = rng.standard_normal((n, n))
    Q = B @ B.T
    return 0.5 * (Q + Q.T)


def gen_structured(n: int, rho: int, seed: int) -> tuple[np.ndarray, float, np.ndarray]:
    """Instance with a certified rho-sparse optimum.

    Samples x on a random rho-subset with full support, builds P = Pi V V' Pi
    with Pi the orthogonal projector annihilating x, N nonnegative vanishing
    on the support-support block, and a uniform lambda in [-1, 1].
    Returns (Q, lambda, x).
    """
    if not 1 <= rho <= n:
        raise InvalidArgument(f"rho={rho} outside [1, {n}]")
    rng = np.random.default_rng(seed)
    supp = np.sort(rng.choice(n, size=rho, replace=False))
    x = np.zeros(n)
    x[supp] = rng.uniform(0.2, 1.0, size=rho)
    x /= x.sum()
    Pi = np.eye(n) - np.outer(x, x) / float(x @ x)
    V = rng.standard_normal((n, max(1, n - 1)))
    P = Pi @ V @ V.T @ Pi
    P = 0.5 * (P + P.T)
    N = rng.uniform(0.0, 1.0, size=(n, n))
    N = 0.5 * (N + N.T)
    mask = np.outer(x > 0, x > 0)
    N[mask] = 0.0
    lam = float(rng.uniform(-1.0, 1.0))
    cert = DecompositionCertificate(x=x, P=P, N=N, lam=lam)
    Q, value = build_exact_instance(cert)
    return Q, value, x


def generate(
    n: int, dist: str, rho: int | None = None, seed: int = 0
) -> InstanceFile:
    """Build an InstanceFile for one of the supported distributions."""
    if n < 2:
        raise InvalidArgument("n must be at least 2")
    if dist == "uniform":
        Q = gen_uniform(n, seed)
        known = None
    elif dist == "gaussian":
        Q = gen_gaussian(n, seed)
        known = None
    elif dist == "psd":
        Q = gen_psd(n, seed)
        known = None
    elif dist == "structured":
        if rho is None:
            raise InvalidArgument("structured generation requires rho")
        try:
            Q, known, _ = gen_structured(n, rho, seed)
        except DomainError as exc:
            raise InvalidArgument(str(exc)) from exc
    else:
        raise InvalidArgument(f"unknown distribution {dist!r}")
    label = f"{dist}-n{n}" + (f"-rho{rho}" if rho is not None else "") + f"-s{seed}"
    return InstanceFile(Q=Q, rho=rho, label=label, seed=seed, known_value=known)
