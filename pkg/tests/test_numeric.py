"""Sampled SEMs, partial correlations and approximate implication."""

import math

import numpy as np
import pytest

from gaussci.dag import Dag, enumerate_dags, random_dag
from gaussci.implication import AugmentedModel, CiStatement
from gaussci.numeric import (
    ApproxQuery,
    approx_implies,
    batch_partial_correlation,
    batch_sigma,
    build_sigma,
    check_rho_factorization,
    implication_witness,
    mi_gap,
    partial_correlation,
    partial_correlation_precision,
    sample_sem,
    search_counterexample,
    sem_sigma,
    statement_partial_correlation,
)
from gaussci.poly import omega_var, lambda_var
from gaussci.trek import phi_sigma, sigma_entry

FIG = Dag(5, [(1, 2), (2, 4), (3, 4), (3, 5), (4, 5)])
CHAIN = Dag(3, [(1, 2), (2, 3)])


def test_build_sigma_two_node():
    g = Dag(2, [(1, 2)])
    sem = build_sigma(g, {(1, 2): 1.0}, (1.0, 1.0))
    assert np.allclose(sem.sigma(), [[1.0, 1.0], [1.0, 2.0]])
    # omega may come as a dict keyed by node.
    sem = build_sigma(g, {(1, 2): 0.5}, {1: 2.0, 2: 1.0})
    assert np.allclose(sem.sigma(), [[2.0, 1.0], [1.0, 1.5]])


def test_build_sigma_validation():
    g = Dag(2, [(1, 2)])
    with pytest.raises(ValueError):
        build_sigma(g, {}, (1.0, 1.0))
    with pytest.raises(ValueError):
        build_sigma(g, {(1, 2): 1.0, (2, 1): 1.0}, (1.0, 1.0))
    with pytest.raises(ValueError):
        build_sigma(g, {(1, 2): 1.0}, (1.0, -1.0))
    with pytest.raises(ValueError):
        build_sigma(g, {(1, 2): 1.0}, (1.0,))


def test_zero_weights_give_diagonal():
    lam = {e: 0.0 for e in FIG.edges}
    omega = (0.5, 1.0, 1.5, 2.0, 2.5)
    assert np.allclose(sem_sigma(FIG, lam, omega), np.diag(omega))


def test_sample_sem_ranges():
    rng = np.random.default_rng(3)
    for _ in range(20):
        sem = sample_sem(FIG, rng)
        assert all(0.2 <= abs(v) <= 2.0 for v in sem.lam)
        assert all(0.2 <= v <= 2.0 for v in sem.omega)
        np.linalg.cholesky(sem.sigma())


def test_sigma_matches_symbolic_evaluation():
    rng = np.random.default_rng(11)
    for n in (3, 4, 5, 6):
        g = random_dag(n, rng)
        sigma = phi_sigma(g)
        for _ in range(5):
            sem = sample_sem(g, rng)
            values = {omega_var(v): sem.omega[v - 1] for v in g.nodes}
            values.update(
                (lambda_var(a, b), w)
                for (a, b), w in sem.lam_dict().items()
            )
            num = sem.sigma()
            for i in g.nodes:
                for j in range(i, n + 1):
                    sym = sigma_entry(sigma, i, j).evaluate(values)
                    assert abs(sym - num[i - 1, j - 1]) < 1e-9


def test_partial_correlation_routes_agree():
    rng = np.random.default_rng(5)
    from itertools import combinations

    for _ in range(10):
        sem = sample_sem(FIG, rng)
        for i, j in combinations(range(1, 6), 2):
            rest = [v for v in range(1, 6) if v not in (i, j)]
            for r in range(len(rest) + 1):
                for K in combinations(rest, r):
                    a = partial_correlation(sem, i, j, K)
                    b = partial_correlation_precision(sem, i, j, K)
                    assert abs(a - b) < 1e-10


def test_partial_correlation_validation():
    sem = sample_sem(FIG, np.random.default_rng(0))
    with pytest.raises(ValueError):
        partial_correlation(sem, 1, 1, ())
    with pytest.raises(ValueError):
        partial_correlation(sem, 1, 2, {2})
    s = CiStatement({1}, {5}, {4})
    assert statement_partial_correlation(sem, s) == partial_correlation(
        sem, 1, 5, {4}
    )


def test_batch_matches_single_draws():
    sigmas = batch_sigma(FIG, 4, seed=9)
    for k in range(4):
        sem = sample_sem(FIG, np.random.default_rng([9, k]))
        assert np.allclose(sigmas[k], sem.sigma())
    batch = batch_partial_correlation(sigmas, 1, 5, {4})
    for k in range(4):
        assert batch[k] == pytest.approx(partial_correlation(sigmas[k], 1, 5, {4}))


def test_approx_query_validation():
    with pytest.raises(ValueError):
        ApproxQuery(1, 1, 2)
    with pytest.raises(ValueError):
        ApproxQuery(1, 2, 3, K={2})
    with pytest.raises(ValueError):
        ApproxQuery(1, 2, 3, delta=1.5)


def test_approx_implies_cases():
    # Chain: near-independence of (1,2) forces it for (1,3).
    assert approx_implies(CHAIN, ApproxQuery(1, 2, 3))
    # But near-independence of (1,3) says nothing about (1,2).
    assert not approx_implies(CHAIN, ApproxQuery(1, 3, 2))
    # Running example: the motivating failure.
    assert not approx_implies(FIG, ApproxQuery(1, 4, 5))
    # Conclusion already separated: vacuously true.
    assert approx_implies(FIG, ApproxQuery(1, 2, 3))
    # Premise separated: rejected.
    with pytest.raises(ValueError):
        approx_implies(FIG, ApproxQuery(1, 3, 2))


def test_rho_factorization_residual():
    rng = np.random.default_rng(2)
    for _ in range(20):
        sem = sample_sem(CHAIN, rng)
        assert check_rho_factorization(sem, 1, 2, 3) < 1e-12
    sem = sample_sem(FIG, rng)
    # 1 d-separated from 5 given {2} in the running example.
    assert check_rho_factorization(sem, 1, 2, 5) < 1e-12
    with pytest.raises(ValueError):
        check_rho_factorization(sem, 1, 4, 5)


def test_mi_gap_values():
    S = np.array([[1.0, 0.0, 0.6], [0.0, 1.0, 0.0], [0.6, 0.0, 1.0]])
    assert mi_gap(S, 1, 2, 3) == pytest.approx(-0.22314355131420974)
    assert mi_gap(S, 1, 3, 2) == pytest.approx(0.22314355131420974)
    # Equal correlations cancel exactly.
    assert mi_gap(S, 2, 1, 3, ()) == 0.0
    # Perfect correlation on one side gives an infinite gap.
    P = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 1.0]])
    assert mi_gap(P, 1, 2, 3) == -math.inf
    # Both sides infinite: defined as zero.
    Q = np.ones((3, 3))
    assert mi_gap(Q, 1, 2, 3) == 0.0


def test_mi_gap_accepts_sems():
    sem = sample_sem(CHAIN, np.random.default_rng(4))
    gap = mi_gap(sem, 1, 2, 3)
    # Implied direction: the gap is nonnegative.
    assert gap >= 0.0


def test_search_counterexample_finds_witness():
    q = ApproxQuery(1, 4, 5)
    w = search_counterexample(FIG, q, budget=50, seed=0)
    assert w is not None
    assert abs(w.rho_ij) <= q.delta < abs(w.rho_il)
    assert w.sem.dag == FIG
    assert len(w.omega_scaled) == 5
    # Recompute the correlations from the reported parameters.
    sigma = sem_sigma(FIG, w.sem.lam_dict(), w.omega_scaled)
    assert partial_correlation(sigma, 1, 4, ()) == pytest.approx(w.rho_ij)
    assert partial_correlation(sigma, 1, 5, ()) == pytest.approx(w.rho_il)


def test_search_counterexample_edge_cases():
    assert search_counterexample(FIG, ApproxQuery(1, 4, 5), budget=0) is None
    with pytest.raises(ValueError):
        search_counterexample(CHAIN, ApproxQuery(1, 2, 3))


def test_implication_witness():
    model = AugmentedModel(FIG, CiStatement({1}, {5}, {4}))
    # 2 _||_ 5 fails on some component of the decomposition.
    w = implication_witness(model, CiStatement({2}, {5}, ()), seed=1)
    assert w is not None
    assert w.component.edges < FIG.edges
    assert abs(w.rho) > 0.1
    assert abs(partial_correlation(w.sem, 2, 5, ())) == pytest.approx(abs(w.rho))
    # No exact decomposition available: inconclusive.
    model = AugmentedModel(FIG, CiStatement({2}, {4}, {5}))
    assert implication_witness(model, CiStatement({1}, {2}, {5})) is None
