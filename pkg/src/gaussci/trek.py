"""Trek-rule parameterization of Gaussian DAG models.

Maps entries of the model covariance matrix to polynomials in the edge
weights ``l<a>_<b>`` and error variances ``w<v>``: the image of sigma_ij is
the sum, over all treks between i and j, of the trek monomial (top node's
omega times the lambda of every edge on both sides).  Built on top of that:
almost-principal minors, the principal-minor images used for saturation,
and enumeration of trek systems without sided intersection.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from sympy import ZZ
from sympy.polys.rings import ring as _sympy_ring

from .dag import Dag, Trek, enumerate_treks
from .errors import GuardError
from .poly import (
    MvPoly,
    PolyMatrix,
    Variable,
    determinant,
    exact_divide,
    lambda_var,
    monomial_factors,
    omega_var,
    variable_text,
)

SigmaMap = dict[tuple[int, int], MvPoly]


def _lambda_poly(a: int, b: int) -> MvPoly:
    return MvPoly.variable(lambda_var(a, b))


@lru_cache(maxsize=128)
def phi_sigma(g: Dag) -> SigmaMap:
    """Symbolic covariance of the model: entries keyed by (i, j), i <= j.

    Computed through the matrix identity Sigma = S^T Omega S with
    S = (I - Lambda)^{-1} expanded as the finite geometric series
    I + Lambda + ... + Lambda^{n-1} (Lambda is nilpotent on a DAG).
    """
    n = g.n
    # paths[v][i]: sum of lambda path monomials over directed paths v -> i.
    paths: dict[int, dict[int, MvPoly]] = {
        v: {v: MvPoly.constant(1)} for v in g.nodes
    }
    power: dict[tuple[int, int], MvPoly] = {
        (a, b): _lambda_poly(a, b) for a, b in g.edges
    }
    while power:
        for (v, i), p in power.items():
            row = paths[v]
            row[i] = row.get(i, MvPoly.zero()) + p
        nxt: dict[tuple[int, int], MvPoly] = {}
        for (v, i), p in power.items():
            for c in g.children(i):
                key = (v, c)
                q = p * _lambda_poly(i, c)
                nxt[key] = nxt.get(key, MvPoly.zero()) + q
        power = nxt
    sigma: SigmaMap = {}
    omegas = {v: MvPoly.variable(omega_var(v)) for v in g.nodes}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            acc = MvPoly.zero()
            for v in g.nodes:
                left = paths[v].get(i)
                right = paths[v].get(j)
                if left is not None and right is not None:
                    acc = acc + omegas[v] * left * right
            sigma[(i, j)] = acc
    return sigma


def sigma_entry(sigma: SigmaMap, i: int, j: int) -> MvPoly:
    return sigma[(i, j)] if i <= j else sigma[(j, i)]


def trek_monomial(t: Trek) -> MvPoly:
    """omega of the top times the lambda of every edge on both sides."""
    out = MvPoly.variable(omega_var(t.top))
    for side in (t.left, t.right):
        for a, b in zip(side, side[1:]):
            out = out * _lambda_poly(a, b)
    return out


def trek_rule_sigma(g: Dag, i: int, j: int) -> MvPoly:
    """Covariance entry by direct trek enumeration (oracle for phi_sigma)."""
    acc = MvPoly.zero()
    for t in enumerate_treks(g, i, j):
        acc = acc + trek_monomial(t)
    return acc


def phi_minor(
    g: Dag,
    rows: Iterable[int],
    cols: Iterable[int],
    sigma: SigmaMap | None = None,
) -> MvPoly:
    """Image of the minor with the given row and column sets (sorted).

    Rows and columns may overlap (as they do for the almost-principal
    minors |Sigma_{iK,jK}|); they must have equal cardinality.
    """
    rows = sorted(set(rows))
    cols = sorted(set(cols))
    if len(rows) != len(cols):
        raise ValueError("row and column sets must have equal size")
    if not rows:
        raise ValueError("empty row set")
    for v in itertools.chain(rows, cols):
        g._check_node(v)
    if sigma is None:
        sigma = phi_sigma(g)
    mat = [[sigma_entry(sigma, r, c) for c in cols] for r in rows]
    return determinant(mat)


def ci_minor(
    g: Dag,
    i: int,
    j: int,
    K: Iterable[int],
    sigma: SigmaMap | None = None,
) -> MvPoly:
    """Almost-principal minor |Sigma_{{i} u K, {j} u K}| for i _||_ j | K."""
    K = set(K)
    if i in K or j in K or i == j:
        raise ValueError("statement endpoints must be distinct and outside K")
    return phi_minor(g, {i} | K, {j} | K, sigma)


def principal_minor_images(
    g: Dag, sigma: SigmaMap | None = None
) -> dict[frozenset[int], MvPoly]:
    """phi image of |Sigma_{S,S}| for every nonempty S (guard: n <= 12)."""
    if g.n > 12:
        raise GuardError(
            f"principal minors over {g.n} nodes: 2^{g.n} - 1 determinants refused"
        )
    if sigma is None:
        sigma = phi_sigma(g)
    out: dict[frozenset[int], MvPoly] = {}
    nodes = list(g.nodes)
    for r in range(1, g.n + 1):
        for S in itertools.combinations(nodes, r):
            out[frozenset(S)] = phi_minor(g, S, S, sigma)
    return out


# -- saturation ---------------------------------------------------------------
#
# Principal-minor images are strictly positive wherever all omegas are
# positive (they are principal minors of a genuine covariance matrix there),
# so any polynomial factor shared with one of them never vanishes on the
# model's parameter space.  Saturating the ideal of a minor therefore strips
# every such shared factor -- not just whole images -- which requires a
# multivariate gcd; sympy's ZZ polynomial rings supply it.


@lru_cache(maxsize=128)
def _sympy_ring_for(g: Dag):
    variables: list[Variable] = [omega_var(v) for v in g.nodes]
    variables.extend(lambda_var(a, b) for a, b in g.sorted_edges())
    names = ",".join(variable_text(v) for v in variables)
    R = _sympy_ring(names, ZZ)[0]
    index = {v: k for k, v in enumerate(variables)}
    return R, variables, index


def _to_ring(R, index, f: MvPoly):
    nvars = len(index)
    d = {}
    for mono, coef in f.terms_dict().items():
        exp = [0] * nvars
        for v, e in mono:
            exp[index[v]] = e
        d[tuple(exp)] = coef
    return R.from_dict(d)


def _from_ring(variables, el) -> MvPoly:
    terms = {}
    for exp, coef in dict(el).items():
        mono = tuple(
            (variables[k], e) for k, e in enumerate(exp) if e
        )
        terms[mono] = int(coef)
    return MvPoly(terms)


def saturate(
    f: MvPoly,
    g: Dag,
    images: Mapping[frozenset[int], MvPoly] | None = None,
) -> MvPoly:
    """Canonical generator of the ideal of f saturated by all principal minors.

    Removes from f, to full multiplicity, every factor it shares with some
    principal-minor image of g.  Omega variables always disappear (each
    divides the image of the full determinant |Sigma|); lambda variables
    never do (setting a lambda to zero keeps all omegas positive, where
    every image is positive).  The result is primitive with positive
    leading coefficient, making it canonical; it is independent of the
    order the images are processed in.
    """
    if f.is_zero():
        return f
    # Cheap first stage: split off the common monomial, drop its omega part.
    mono, cof = monomial_factors(f)
    lam_part = tuple((v, e) for v, e in mono if v[0] == 1)
    if cof.is_constant():
        result = MvPoly.term(lam_part, 1)
        return result
    if images is None:
        images = principal_minor_images(g)
    R, variables, index = _sympy_ring_for(g)
    cof_vars = cof.variables()
    for S in sorted(images, key=lambda s: (len(s), sorted(s))):
        h = images[S]
        if not (h.variables() & cof_vars):
            continue
        h_ring = _to_ring(R, index, h)
        while True:
            shared = _from_ring(variables, _to_ring(R, index, cof).gcd(h_ring))
            if shared.is_constant():
                break
            cof = exact_divide(cof, shared)
            if cof.is_constant():
                break
        if cof.is_constant():
            break
        cof_vars = cof.variables()
    out = MvPoly.term(lam_part, 1) * cof.primitive_part()
    if out.leading()[1] < 0:
        out = -out
    return out


# -- trek systems --------------------------------------------------------------


def trek_systems_nsi(
    g: Dag,
    A: Iterable[int],
    B: Iterable[int],
    max_count: int | None = None,
) -> list[tuple[Trek, ...]]:
    """Trek systems from A onto B with no sided intersection.

    A system assigns one trek to each node of A so that the trek sources
    exhaust A, the targets exhaust B, no two left sides share a node and no
    two right sides share a node.  Treks within a system are listed in
    order of their source; systems are returned sorted.  ``max_count``
    caps the search (useful when only existence/uniqueness matters).
    Guard: |A| <= 6.
    """
    A = sorted(set(A))
    B = sorted(set(B))
    if len(A) != len(B):
        raise ValueError("A and B must have equal cardinality")
    if len(A) > 6:
        raise GuardError("trek system search over more than 6 sources refused")
    for v in itertools.chain(A, B):
        g._check_node(v)

    treks: dict[tuple[int, int], list[Trek]] = {}
    for a in A:
        for b in B:
            treks[(a, b)] = enumerate_treks(g, a, b)

    out: list[tuple[Trek, ...]] = []
    chosen: list[Trek] = []
    used_b: set[int] = set()
    left_nodes: set[int] = set()
    right_nodes: set[int] = set()

    def backtrack(pos: int) -> bool:
        if max_count is not None and len(out) >= max_count:
            return True
        if pos == len(A):
            out.append(tuple(chosen))
            return max_count is not None and len(out) >= max_count
        a = A[pos]
        for b in B:
            if b in used_b:
                continue
            for t in treks[(a, b)]:
                ln = set(t.left)
                if ln & left_nodes:
                    continue
                rn = set(t.right)
                if rn & right_nodes:
                    continue
                chosen.append(t)
                used_b.add(b)
                left_nodes.update(ln)
                right_nodes.update(rn)
                stop = backtrack(pos + 1)
                chosen.pop()
                used_b.remove(b)
                left_nodes.difference_update(ln)
                right_nodes.difference_update(rn)
                if stop:
                    return True
        return False

    backtrack(0)
    return sorted(out)


def trek_system_monomial(system: Sequence[Trek]) -> MvPoly:
    out = MvPoly.constant(1)
    for t in system:
        out = out * trek_monomial(t)
    return out
