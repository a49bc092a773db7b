"""Sampled linear structural equation models and approximate implication.

An SEM over a DAG assigns an edge weight to every arrow and a positive
error variance to every node; the induced covariance is
(I - L)^-T W (I - L)^-1 with L the weight matrix and W the diagonal of
error variances.  Approximate implication asks: does every covariance in
the model that nearly satisfies one conditional independence nearly
satisfy another, at every tolerance?  That holds exactly when the target
pair is d-separated given the conditioning set plus the middle node, so
the decision procedure is purely graphical; the numeric machinery here
exists to validate it and to produce explicit counterexamples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .dag import Dag, Edge, d_separated
from .implication import AugmentedModel, CiStatement, exact_components

LAMBDA_RANGE = (0.2, 2.0)
OMEGA_RANGE = (0.2, 2.0)


@dataclass(frozen=True)
class NumericSem:
    """One parameter point: edge weights aligned with dag.sorted_edges()."""

    dag: Dag
    lam: tuple[float, ...]
    omega: tuple[float, ...]

    def lam_dict(self) -> dict[Edge, float]:
        return dict(zip(self.dag.sorted_edges(), self.lam))

    def sigma(self) -> np.ndarray:
        return sem_sigma(self.dag, self.lam_dict(), self.omega)


def sample_sem(dag: Dag, rng: np.random.Generator) -> NumericSem:
    """Draw edge weights uniform on +-[0.2, 2] and variances on [0.2, 2]."""
    m = len(dag.edges)
    lo, hi = LAMBDA_RANGE
    lam = rng.uniform(lo, hi, size=m) * rng.choice([-1.0, 1.0], size=m)
    omega = rng.uniform(*OMEGA_RANGE, size=dag.n)
    return NumericSem(dag, tuple(lam.tolist()), tuple(omega.tolist()))


def sem_sigma(dag: Dag, lam: dict[Edge, float], omega) -> np.ndarray:
    """Covariance matrix of the SEM; raises LinAlgError if not positive definite."""
    n = dag.n
    L = np.zeros((n, n))
    for (a, b), val in lam.items():
        L[a - 1, b - 1] = val
    M = np.linalg.inv(np.eye(n) - L)
    omega = np.asarray(omega, dtype=float)
    sigma = M.T @ (omega[:, None] * M)
    np.linalg.cholesky(sigma)
    return sigma


def build_sigma(dag: Dag, lam: dict[Edge, float], omega) -> NumericSem:
    """Validated SEM from explicit parameters.

    lam must be keyed by exactly the edges of the DAG and every error
    variance must be strictly positive; the induced covariance is checked
    for positive definiteness.
    """
    if set(lam) != set(dag.edges):
        raise ValueError("lambda must assign a weight to exactly the edges of the DAG")
    if isinstance(omega, dict):
        omega = [omega[v] for v in dag.nodes]
    omega = [float(w) for w in omega]
    if len(omega) != dag.n:
        raise ValueError("omega must assign a variance to every node")
    if min(omega) <= 0.0:
        raise ValueError("error variances must be strictly positive")
    sem = NumericSem(
        dag,
        tuple(float(lam[e]) for e in dag.sorted_edges()),
        tuple(omega),
    )
    sem.sigma()
    return sem


def batch_sigma(dag: Dag, draws: int, seed: int) -> np.ndarray:
    """Covariances of `draws` sampled SEMs, shape (draws, n, n).

    Draw k is reproducible in isolation: it uses the stream seeded by
    [seed, k], matching a loop over sample_sem with those seeds.
    """
    sigmas = np.empty((draws, dag.n, dag.n))
    for k in range(draws):
        sem = sample_sem(dag, np.random.default_rng([seed, k]))
        sigmas[k] = sem.sigma()
    return sigmas


def _cov(sem) -> np.ndarray:
    """Covariance matrix of a NumericSem, or a covariance passed through."""
    if isinstance(sem, NumericSem):
        return sem.sigma()
    return np.asarray(sem, dtype=float)


def partial_correlation(sem, i: int, j: int, K=()) -> float:
    """Partial correlation of nodes i and j given the set K (1-based).

    Accepts a NumericSem or a covariance matrix directly.
    """
    sigma = _cov(sem)
    return float(batch_partial_correlation(sigma[None, :, :], i, j, K)[0])


def batch_partial_correlation(sigmas: np.ndarray, i: int, j: int, K) -> np.ndarray:
    """Partial correlations across a batch of covariance matrices."""
    K = sorted(set(K))
    if i == j or i in K or j in K:
        raise ValueError("endpoints must be distinct and outside K")
    ij = [i - 1, j - 1]
    A = sigmas[:, ij][:, :, ij]
    if K:
        ks = [v - 1 for v in K]
        B = sigmas[:, ij][:, :, ks]
        D = sigmas[:, ks][:, :, ks]
        A = A - B @ np.linalg.solve(D, np.transpose(B, (0, 2, 1)))
    return A[:, 0, 1] / np.sqrt(A[:, 0, 0] * A[:, 1, 1])


def statement_partial_correlation(sem, s: CiStatement) -> float:
    i, j, K = s.elementary()
    return partial_correlation(sem, i, j, K)


def partial_correlation_precision(sem, i: int, j: int, K=()) -> float:
    """Same quantity through the precision matrix of the {i,j} u K block.

    Kept as an independent route for cross-checking the Schur-complement
    computation: with P the inverse of that principal submatrix,
    rho_ij.K = -P_ij / sqrt(P_ii P_jj).
    """
    sigma = _cov(sem)
    K = sorted(set(K))
    if i == j or i in K or j in K:
        raise ValueError("endpoints must be distinct and outside K")
    idx = [i - 1, j - 1] + [v - 1 for v in K]
    P = np.linalg.inv(sigma[np.ix_(idx, idx)])
    return float(-P[0, 1] / math.sqrt(P[0, 0] * P[1, 1]))


# -- approximate implication -------------------------------------------------------


@dataclass(frozen=True)
class ApproxQuery:
    """Does near-independence of (i, j) given K force it for (i, l) given K?

    delta is the tolerance defining "near": a witness against the
    implication satisfies |rho_ij.K| <= delta < |rho_il.K|.
    """

    i: int
    j: int
    l: int
    K: frozenset[int]
    delta: float

    def __init__(self, i: int, j: int, l: int, K=(), delta: float = 0.05):
        K = frozenset(K)
        if len({i, j, l}) != 3 or {i, j, l} & K:
            raise ValueError("i, j, l must be distinct and outside K")
        if not 0.0 <= delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "delta", delta)

    def validate_nodes(self, g: Dag) -> None:
        for v in {self.i, self.j, self.l} | self.K:
            g._check_node(v)


def approx_implies(g: Dag, q: ApproxQuery) -> bool:
    """Approximate implication at every tolerance, decided graphically.

    Requires that K does not d-separate i from j, else the premise is
    vacuous in the model and the query is rejected.  When K d-separates
    i from l the conclusion already holds everywhere and the answer is
    True regardless of paths through j.
    """
    q.validate_nodes(g)
    if d_separated(g, {q.i}, {q.j}, q.K):
        raise ValueError("K d-separates i from j; premise holds on all of the model")
    if d_separated(g, {q.i}, {q.l}, q.K):
        return True
    return d_separated(g, {q.i}, {q.l}, {q.j} | q.K)


def check_rho_factorization(sem: NumericSem, x: int, a: int, c: int, B=()) -> float:
    """Residual of the chained-correlation identity rho_xc.B = rho_xa.B rho_ac.B.

    The identity holds whenever c is d-separated from x given {a} union B,
    which is required here; the returned |rho_xc.B - rho_xa.B * rho_ac.B|
    should then be at rounding level for any positive definite SEM.
    """
    B = frozenset(B)
    if not d_separated(sem.dag, {x}, {c}, {a} | B):
        raise ValueError("c must be d-separated from x given {a} and B")
    sigma = sem.sigma()
    r_xc = partial_correlation(sigma, x, c, B)
    r_xa = partial_correlation(sigma, x, a, B)
    r_ac = partial_correlation(sigma, a, c, B)
    return abs(r_xc - r_xa * r_ac)


def mi_gap(sem, i: int, j: int, l: int, K=()) -> float:
    """Difference of conditional mutual informations I(i;j|K) - I(i;l|K).

    In nats: 0.5 * log((1 - rho_il.K^2) / (1 - rho_ij.K^2)) with the sign
    such that the gap is nonnegative whenever |rho_ij.K| >= |rho_il.K|,
    in particular whenever the approximate implication holds.  A partial
    correlation of magnitude one makes the corresponding information
    infinite and the gap is returned as +-inf (0 when both are infinite).
    """
    sigma = _cov(sem)
    r_ij = partial_correlation(sigma, i, j, K)
    r_il = partial_correlation(sigma, i, l, K)

    def mi(r: float) -> float:
        x = 1.0 - r * r
        return math.inf if x <= 0.0 else -0.5 * math.log(x)

    g_ij, g_il = mi(r_ij), mi(r_il)
    if g_ij == math.inf and g_il == math.inf:
        return 0.0
    return g_ij - g_il


# -- counterexample search ----------------------------------------------------------


@dataclass(frozen=True)
class ApproxWitness:
    """A covariance nearly satisfying the premise but not the conclusion."""

    sem: NumericSem
    omega_scaled: tuple[float, ...]
    rho_ij: float
    rho_il: float
    evaluations: int


_SCALE_GRID = tuple(10.0 ** e for e in (-6, -4, -2, -1, 1, 2, 4, 6))


def search_counterexample(
    g: Dag,
    q: ApproxQuery,
    budget: int = 10_000,
    seed: int = 0,
) -> ApproxWitness | None:
    """Look for a covariance with |rho_ij.K| <= q.delta < |rho_il.K|.

    Random restarts draw a base SEM; within each restart single error
    variances and pairs of them are scaled through a logarithmic grid
    spanning 1e-6 to 1e6, which drives partial correlations toward their
    limiting values.  The budget bounds the number of restarts, each of
    which runs the full grid.  None after budget exhaustion is
    inconclusive, not a proof of absence.  Only meaningful for queries
    where approx_implies is False; otherwise no witness exists and the
    call is rejected.
    """
    if approx_implies(g, q):
        raise ValueError("query is implied at every tolerance; no witness exists")
    delta = q.delta
    n = g.n
    subsets = [()] + [(v,) for v in range(1, n + 1)] + list(combinations(range(1, n + 1), 2))
    evaluations = 0
    for restart in range(budget):
        sem = sample_sem(g, np.random.default_rng([seed, restart]))
        lam = sem.lam_dict()
        base = np.asarray(sem.omega)
        for subset in subsets:
            scales = (1.0,) if not subset else _SCALE_GRID
            for scale in scales:
                omega = base.copy()
                for v in subset:
                    omega[v - 1] *= scale
                sigma = sem_sigma(g, lam, omega)
                evaluations += 1
                rho_ij = partial_correlation(sigma, q.i, q.j, q.K)
                rho_il = partial_correlation(sigma, q.i, q.l, q.K)
                if abs(rho_ij) <= delta < abs(rho_il):
                    return ApproxWitness(
                        sem, tuple(omega.tolist()), rho_ij, rho_il, evaluations
                    )
    return None


# -- exact-implication refutation ----------------------------------------------------


@dataclass(frozen=True)
class RefutationWitness:
    """A sampled SEM inside the model where the query correlation is far from zero."""

    component: Dag
    sem: NumericSem
    rho: float


def implication_witness(
    model: AugmentedModel,
    query: CiStatement,
    draws: int = 200,
    seed: int = 0,
    threshold: float = 0.1,
) -> RefutationWitness | None:
    """Try to upgrade a negative exact verdict with a concrete SEM.

    When the augmented model decomposes exactly into edge-deleted DAG
    models, points of those models are honest members of the model, so a
    sampled SEM with |partial correlation| above the threshold witnesses
    that the query fails on the positive definite part.  Returns None when
    no decomposition is available or no sample clears the threshold.
    """
    a, b, C = query.elementary()
    components = exact_components(model)
    if components is None:
        return None
    for comp in components:
        for k in range(draws):
            sem = sample_sem(comp, np.random.default_rng([seed, k]))
            rho = partial_correlation(sem, a, b, C)
            if abs(rho) > threshold:
                return RefutationWitness(comp, sem, rho)
    return None
