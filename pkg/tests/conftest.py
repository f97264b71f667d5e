"""Shared test helpers: independent brute-force oracles and reference data."""

from itertools import combinations

import numpy as np
import pytest


def random_symmetric(n, seed, dist="uniform"):
    rng = np.random.default_rng(seed)
    if dist == "uniform":
        A = rng.uniform(0.0, 1.0, size=(n, n))
    else:
        A = rng.standard_normal((n, n))
    return 0.5 * (A + A.T)


def random_psd(n, seed):
    rng = np.random.default_rng(seed)
    B = rng.standard_normal((n, n))
    Q = B @ B.T
    return 0.5 * (Q + Q.T)


def random_simplex_point(n, nu, rng):
    x = np.zeros(n)
    supp = np.sort(rng.choice(n, size=nu, replace=False))
    x[supp] = rng.uniform(0.2, 1.0, size=nu)
    return x / x.sum()


def _compositions(total, parts):
    """All nonnegative integer tuples of length `parts` summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head, *rest)


def grid_min(Q, rho, step=0.02):
    """Brute-force grid minimum of x'Qx over the simplex restricted to at most
    rho nonzeros. Independent of the enumeration oracle (no KKT systems)."""
    n = Q.shape[0]
    units = round(1.0 / step)
    best = np.inf
    for supp in combinations(range(n), rho):
        sub = Q[np.ix_(supp, supp)]
        for comp in _compositions(units, rho):
            x = np.asarray(comp, dtype=float) * step
            best = min(best, float(x @ sub @ x))
    return best


def brute_force_ell2(Q):
    """Independent ell_2: fine 1-d scan over every edge plus the vertices."""
    n = Q.shape[0]
    ts = np.linspace(0.0, 1.0, 20001)
    best = float(np.min(np.diag(Q)))
    for i in range(n):
        for j in range(i + 1, n):
            vals = (
                ts**2 * Q[i, i] + 2 * ts * (1 - ts) * Q[i, j] + (1 - ts) ** 2 * Q[j, j]
            )
            best = min(best, float(np.min(vals)))
    return best


# Printed 4-decimal example point: n = 6, rho = 3, a rank-one lift that is
# feasible although the pair-product sufficient condition fails.
EXLE_X = np.array([0.6, 0.2, 0.05, 0.05, 0.05, 0.05])
EXLE_U = np.array([0.8866, 0.5512, 0.3905, 0.3906, 0.3906, 0.3905])
EXLE_BIGU = np.array(
    [
        [0.8866, 0.4674, 0.3264, 0.3265, 0.3265, 0.3264],
        [0.4674, 0.5512, 0.1588, 0.1588, 0.1588, 0.1588],
        [0.3264, 0.1588, 0.3905, 0.0986, 0.0986, 0.0986],
        [0.3265, 0.1588, 0.0986, 0.3906, 0.0986, 0.0986],
        [0.3265, 0.1588, 0.0986, 0.0986, 0.3906, 0.0986],
        [0.3264, 0.1588, 0.0986, 0.0986, 0.0986, 0.3905],
    ]
)


@pytest.fixture
def exle_point():
    from sparsestqp.core import ExtendedLiftedPoint

    return ExtendedLiftedPoint(
        x=EXLE_X,
        u=EXLE_U,
        X=np.outer(EXLE_X, EXLE_X),
        U=EXLE_BIGU,
        R=np.outer(EXLE_X, EXLE_U),
    )
