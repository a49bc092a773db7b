"""Exhaustive cross-validation sweeps over small DAGs.

Every sweep pits two independently implemented routes to the same answer
against each other over all labeled DAGs up to a size bound (optionally
padded with random larger DAGs) and reports disagreements.  An empty
mismatch list is the expected outcome; any entry is a bug or a genuine
counterexample to the criterion being swept.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .dag import (
    Dag,
    d_connecting_paths,
    d_separated,
    edge_on_all_connecting_paths,
    enumerate_dags,
    random_dag,
)
from .gaussoid import _elementary_universe
from .implication import (
    AugmentedModel,
    CiStatement,
    Verdict,
    exact_components,
    implies_exact,
    is_graphical_algebraic,
    is_graphical_graphical,
)
from .numeric import (
    ApproxQuery,
    approx_implies,
    batch_partial_correlation,
    batch_sigma,
    mi_gap,
    search_counterexample,
)
from .poly import monomial_factors
from .trek import ci_minor, phi_sigma, principal_minor_images, trek_rule_sigma, trek_systems_nsi


@dataclass(frozen=True)
class SweepReport:
    name: str
    n_dags: int
    n_cases: int
    mismatches: tuple[str, ...]
    seconds: float

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        status = "ok" if self.ok else "FAILED"
        return (
            f"{self.name}: {status}, {self.n_dags} dags, {self.n_cases} cases, "
            f"{len(self.mismatches)} mismatches ({self.seconds:.1f}s)"
        )


def _case_text(g: Dag, i: int, j: int, K) -> str:
    edges = ",".join(f"{a}->{b}" for a, b in g.sorted_edges())
    cond = "{" + ",".join(map(str, sorted(K))) + "}"
    return f"[{edges}] {i}_||_{j}|{cond}"


def criteria_sweep(max_n: int, progress: bool = False) -> SweepReport:
    """Monomial/graphical/trek-system/divisibility agreement, all DAGs n <= max_n.

    For every elementary statement that is not d-separated this checks:
    d-separation agrees with path enumeration, the algebraic and the path
    criterion for graphicality agree, monomiality coincides with a unique
    no-sided-intersection trek system, and an edge's weight divides the
    minor exactly when the edge lies on every d-connecting path.
    """
    start = time.monotonic()
    mismatches: list[str] = []
    n_dags = n_cases = 0
    for n in range(1, max_n + 1):
        universe = _elementary_universe(n)
        for count, g in enumerate(enumerate_dags(n)):
            if progress and count % 2000 == 0 and count:
                print(f"  n={n}: dag {count}")
            n_dags += 1
            sigma = phi_sigma(g)
            for i, j, K in universe:
                paths = d_connecting_paths(g, i, j, K)
                sep = d_separated(g, {i}, {j}, K)
                if sep != (not paths):
                    mismatches.append("dsep/path " + _case_text(g, i, j, K))
                if sep:
                    continue
                n_cases += 1
                model = AugmentedModel(g, CiStatement({i}, {j}, K))
                alg = is_graphical_algebraic(model, sigma)
                if alg != is_graphical_graphical(model):
                    mismatches.append("criterion " + _case_text(g, i, j, K))
                systems = trek_systems_nsi(g, {i} | K, {j} | K, max_count=2)
                if alg != (len(systems) == 1):
                    mismatches.append("trek-system " + _case_text(g, i, j, K))
                minor = ci_minor(g, i, j, K, sigma)
                mono, _ = monomial_factors(minor)
                lam_edges = {(v[1], v[2]) for v, _e in mono if v[0] == 1}
                for e in g.sorted_edges():
                    on_all = edge_on_all_connecting_paths(g, i, j, K, e)
                    if on_all and e not in lam_edges:
                        mismatches.append(
                            f"edge-div-missing {e} " + _case_text(g, i, j, K)
                        )
                    elif e in lam_edges and not on_all:
                        mismatches.append(
                            f"edge-div-extra {e} " + _case_text(g, i, j, K)
                        )
    return SweepReport(
        "criteria", n_dags, n_cases, tuple(mismatches), time.monotonic() - start
    )


def trek_oracle_sweep(
    max_n: int = 5, random_n: int = 6, random_count: int = 500, seed: int = 0
) -> SweepReport:
    """phi_sigma against direct trek enumeration, exhaustive then randomized."""
    start = time.monotonic()
    mismatches: list[str] = []
    n_dags = n_cases = 0

    def check(g: Dag) -> None:
        nonlocal n_cases
        sigma = phi_sigma(g)
        for i in g.nodes:
            for j in range(i, g.n + 1):
                n_cases += 1
                if sigma[(i, j)] != trek_rule_sigma(g, i, j):
                    mismatches.append("sigma " + _case_text(g, i, j, ()))

    for n in range(1, max_n + 1):
        for g in enumerate_dags(n):
            n_dags += 1
            check(g)
    rng = np.random.default_rng(seed)
    for _ in range(random_count):
        n_dags += 1
        check(random_dag(random_n, rng))
    return SweepReport(
        "trek-oracle", n_dags, n_cases, tuple(mismatches), time.monotonic() - start
    )


def _sample_dags_n5(count: int, seed: int) -> list[Dag]:
    rng = np.random.default_rng(seed)
    return [random_dag(5, rng) for _ in range(count)]


def numeric_soundness_sweep(
    draws: int = 200,
    seed: int = 0,
    n5_samples: int = 50,
    extras_per_dag: int = 4,
) -> SweepReport:
    """Sampled-SEM zero checks behind exact verdicts.

    Part one: on every DAG with n <= 4 plus sampled 5-node DAGs, every
    d-separated elementary statement has |partial correlation| < 1e-9
    across all draws.  Part two: for augmented models whose extra
    statement decomposes exactly, every query judged Implied has
    |partial correlation| < 1e-8 on SEMs sampled inside each component.
    """
    start = time.monotonic()
    mismatches: list[str] = []
    n_dags = n_cases = 0

    dags: list[Dag] = []
    for n in range(2, 5):
        dags.extend(enumerate_dags(n))
    dags.extend(_sample_dags_n5(n5_samples, seed))

    for g in dags:
        n_dags += 1
        universe = _elementary_universe(g.n)
        sigmas = batch_sigma(g, draws, seed)
        separated = []
        connected = []
        for i, j, K in universe:
            (separated if d_separated(g, {i}, {j}, K) else connected).append((i, j, K))
        for i, j, K in separated:
            n_cases += 1
            rho = batch_partial_correlation(sigmas, i, j, K)
            worst = float(np.max(np.abs(rho)))
            if worst >= 1e-9:
                mismatches.append(
                    f"dsep rho {worst:.2e} " + _case_text(g, i, j, K)
                )

        if g.n > 4:
            continue
        sigma = phi_sigma(g)
        images = principal_minor_images(g, sigma)
        for i, j, K in connected[:extras_per_dag]:
            extra = CiStatement({i}, {j}, K)
            model = AugmentedModel(g, extra)
            components = exact_components(model, sigma, images)
            if components is None:
                continue
            implied = [
                CiStatement({a}, {b}, C)
                for a, b, C in connected
                if (a, b, C) != (i, j, K)
                and implies_exact(model, CiStatement({a}, {b}, C), sigma, images)
                is Verdict.IMPLIED
            ]
            for comp in components:
                comp_sigmas = batch_sigma(comp, draws, seed + 1)
                for q in implied:
                    n_cases += 1
                    a, b, C = q.elementary()
                    rho = batch_partial_correlation(comp_sigmas, a, b, C)
                    worst = float(np.max(np.abs(rho)))
                    if worst >= 1e-8:
                        mismatches.append(
                            f"implied rho {worst:.2e} extra={extra} "
                            + _case_text(comp, a, b, C)
                        )
    return SweepReport(
        "numeric-soundness", n_dags, n_cases, tuple(mismatches), time.monotonic() - start
    )


def approx_sweep(
    max_n: int = 4,
    draws: int = 200,
    budget: int = 10_000,
    delta: float = 0.05,
    seed: int = 0,
) -> SweepReport:
    """Desk-scale check of the approximate-implication criterion.

    Valid queries are those whose conditioning set separates neither
    endpoint pair.  When the criterion says implied, the sampled partial
    correlations must satisfy |rho_il.K| <= |rho_ij.K| + 1e-9 and the
    correlation factorization must hold to 1e-9.  When it says not
    implied, the counterexample search must produce a witness.
    """
    start = time.monotonic()
    mismatches: list[str] = []
    n_dags = n_cases = 0
    for n in range(3, max_n + 1):
        nodes = range(1, n + 1)
        for g in enumerate_dags(n):
            n_dags += 1
            sigmas = None
            for i, j, l in permutations(nodes, 3):
                rest = [v for v in nodes if v not in (i, j, l)]
                for bits in range(1 << len(rest)):
                    K = frozenset(v for p, v in enumerate(rest) if bits >> p & 1)
                    if d_separated(g, {i}, {j}, K) or d_separated(g, {i}, {l}, K):
                        continue
                    n_cases += 1
                    q = ApproxQuery(i, j, l, K, delta)
                    if approx_implies(g, q):
                        if sigmas is None:
                            sigmas = batch_sigma(g, draws, seed)
                        r_ij = batch_partial_correlation(sigmas, i, j, K)
                        r_il = batch_partial_correlation(sigmas, i, l, K)
                        r_jl = batch_partial_correlation(sigmas, j, l, K)
                        if np.any(np.abs(r_il) > np.abs(r_ij) + 1e-9):
                            mismatches.append(
                                f"inequality l={l} " + _case_text(g, i, j, K)
                            )
                        residual = float(np.max(np.abs(r_il - r_ij * r_jl)))
                        if residual >= 1e-9:
                            mismatches.append(
                                f"factorization {residual:.2e} l={l} "
                                + _case_text(g, i, j, K)
                            )
                    else:
                        if search_counterexample(g, q, budget=budget, seed=seed) is None:
                            mismatches.append(
                                f"no witness l={l} " + _case_text(g, i, j, K)
                            )
    return SweepReport(
        "approximate", n_dags, n_cases, tuple(mismatches), time.monotonic() - start
    )


def mi_gap_sweep(
    n_dags: int = 50,
    draws: int = 1000,
    max_n: int = 6,
    queries_per_dag: int = 5,
    seed: int = 0,
) -> SweepReport:
    """Information inequality on random DAGs: implied queries have mi_gap >= 0.

    The gap is computed per sampled SEM; values below -1e-9 (beyond
    double-precision fuzz at the |rho_il| = |rho_ij| boundary) count as
    mismatches.
    """
    start = time.monotonic()
    mismatches: list[str] = []
    rng = np.random.default_rng(seed)
    n_cases = 0
    built = 0
    while built < n_dags:
        n = int(rng.integers(3, max_n + 1))
        g = random_dag(n, rng)
        queries = []
        for i, j, l in permutations(range(1, n + 1), 3):
            if d_separated(g, {i}, {j}, frozenset()) or d_separated(
                g, {i}, {l}, frozenset()
            ):
                continue
            q = ApproxQuery(i, j, l)
            if approx_implies(g, q):
                queries.append(q)
            if len(queries) == queries_per_dag:
                break
        if not queries:
            continue
        built += 1
        sigmas = batch_sigma(g, draws, seed + built)
        for q in queries:
            n_cases += 1
            worst = min(mi_gap(sigmas[k], q.i, q.j, q.l, q.K) for k in range(draws))
            if worst < -1e-9:
                mismatches.append(
                    f"mi_gap {worst:.2e} l={q.l} " + _case_text(g, q.i, q.j, q.K)
                )
    return SweepReport(
        "mi-gap", built, n_cases, tuple(mismatches), time.monotonic() - start
    )
