"""Exact conditional-independence implication for DAG models with one extra statement.

The model is the set of covariance matrices of a Gaussian DAG model that
additionally satisfy one conditional independence i _||_ j | K not already
implied by the graph.  Implication of a further statement is decided by an
ideal-membership test on trek-rule images: the almost-principal minor of
the query must be divisible by the saturated minor of the extra statement.
The test is sound; when it fails the query may still hold on the positive
definite part of the model, so the negative verdict is "not implied on the
variety" rather than a flat no.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .dag import Dag, Edge, d_separated
from .poly import MvPoly, divides, lambda_var, monomial_factors
from .trek import (
    SigmaMap,
    ci_minor,
    phi_sigma,
    principal_minor_images,
    saturate,
    trek_systems_nsi,
)


# -- statements ----------------------------------------------------------------


@dataclass(frozen=True)
class CiStatement:
    """Conditional independence A _||_ B | C over 1-based nodes.

    Stored canonically: the side containing the smaller minimum comes
    first.  A and B must be nonempty and A, B, C pairwise disjoint.
    """

    A: frozenset[int]
    B: frozenset[int]
    C: frozenset[int]

    def __init__(self, A: Iterable[int], B: Iterable[int], C: Iterable[int] = ()):
        A, B, C = frozenset(A), frozenset(B), frozenset(C)
        if not A or not B:
            raise ValueError("both independence sides must be nonempty")
        if A & B or A & C or B & C:
            raise ValueError("statement sets must be pairwise disjoint")
        if min(B) < min(A):
            A, B = B, A
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @property
    def is_elementary(self) -> bool:
        return len(self.A) == 1 and len(self.B) == 1

    def elementary(self) -> tuple[int, int, frozenset[int]]:
        if not self.is_elementary:
            raise ValueError("statement is not elementary")
        return next(iter(self.A)), next(iter(self.B)), self.C

    def validate_nodes(self, g: Dag) -> None:
        for v in self.A | self.B | self.C:
            g._check_node(v)

    def __str__(self) -> str:
        return format_statement(self)


def _side_text(S: frozenset[int]) -> str:
    if len(S) == 1:
        return str(next(iter(S)))
    return "{" + ",".join(str(v) for v in sorted(S)) + "}"


def format_statement(s: CiStatement) -> str:
    base = f"{_side_text(s.A)} _||_ {_side_text(s.B)}"
    if s.C:
        return f"{base} | {_side_text(s.C)}"
    return base


_SET_RE = re.compile(r"^\{(\d+(?:,\d+)*)\}$")


def _parse_side(text: str) -> frozenset[int]:
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty node set")
    m = _SET_RE.match(text)
    if m:
        return frozenset(int(x) for x in m.group(1).split(","))
    if text == "{}":
        return frozenset()
    if text.isdigit():
        return frozenset({int(text)})
    raise ValueError(f"cannot parse node set {text!r}")


def parse_statement(text: str) -> CiStatement:
    """Parse ``1 _||_ 5 | 4`` or ``{1,2} _||_ 5 | {3,4}`` (conditioning optional)."""
    if "_||_" not in text:
        raise ValueError(f"missing '_||_' in statement {text!r}")
    left, right = text.split("_||_", 1)
    if "|" in right:
        mid, cond = right.split("|", 1)
        C = _parse_side(cond.strip()) if cond.strip() else frozenset()
    else:
        mid, C = right, frozenset()
    return CiStatement(_parse_side(left.strip()), _parse_side(mid.strip()), C)


# -- models ---------------------------------------------------------------------


@dataclass(frozen=True)
class AugmentedModel:
    """A DAG model intersected with extra elementary CI statements.

    Each extra statement must be elementary and must not already hold by
    d-separation in the graph (otherwise it adds nothing and construction
    is rejected).
    """

    dag: Dag
    extras: tuple[CiStatement, ...]

    def __init__(self, dag: Dag, extras: Iterable[CiStatement] | CiStatement):
        if isinstance(extras, CiStatement):
            extras = (extras,)
        extras = tuple(extras)
        for s in extras:
            s.validate_nodes(dag)
            if not s.is_elementary:
                raise ValueError(f"extra statement {s} is not elementary")
            i, j, K = s.elementary()
            if d_separated(dag, {i}, {j}, K):
                raise ValueError(
                    f"extra statement {s} already holds by d-separation"
                )
        object.__setattr__(self, "dag", dag)
        object.__setattr__(self, "extras", extras)

    def single_extra(self) -> CiStatement:
        if len(self.extras) != 1:
            raise ValueError("operation needs a model with exactly one extra")
        return self.extras[0]


class Verdict(enum.Enum):
    IMPLIED = "implied"
    NOT_IMPLIED_ON_VARIETY = "not_implied_on_variety"


def implies_exact(
    model: AugmentedModel,
    query: CiStatement,
    sigma: SigmaMap | None = None,
    images: Mapping[frozenset[int], MvPoly] | None = None,
) -> Verdict:
    """Decide whether the query holds everywhere on the augmented model.

    IMPLIED when the query is d-separated in the graph, or when the
    saturated query minor is divisible by the saturated minor of the extra
    statement.  The divisibility test is sufficient but not necessary on
    the positive definite part, hence the verdict name for the other case.
    """
    extra = model.single_extra()
    query.validate_nodes(model.dag)
    if not query.is_elementary:
        raise ValueError("query must be elementary")
    a, b, C = query.elementary()
    if d_separated(model.dag, {a}, {b}, C):
        return Verdict.IMPLIED
    if sigma is None:
        sigma = phi_sigma(model.dag)
    if images is None:
        images = principal_minor_images(model.dag, sigma)
    i, j, K = extra.elementary()
    sat_extra = saturate(ci_minor(model.dag, i, j, K, sigma), model.dag, images)
    sat_query = saturate(ci_minor(model.dag, a, b, C, sigma), model.dag, images)
    if divides(sat_extra, sat_query):
        return Verdict.IMPLIED
    return Verdict.NOT_IMPLIED_ON_VARIETY


# -- graphical decomposition -----------------------------------------------------


def is_graphical_algebraic(model: AugmentedModel, sigma: SigmaMap | None = None) -> bool:
    """Monomial test on the raw minor of the extra statement."""
    i, j, K = model.single_extra().elementary()
    return ci_minor(model.dag, i, j, K, sigma).is_monomial()


def is_graphical_graphical(model: AugmentedModel) -> bool:
    """Combinatorial criterion equivalent to the monomial test.

    True iff there is exactly one trek system with no sided intersection
    between {i} u K and {j} u K.  Distinct systems never share a trek
    system monomial for sets of this shape, so uniqueness is exactly the
    condition for the minor to collapse to a single term, decided here
    without touching any polynomial.

    Simpler path formulations do not survive scrutiny.  "Unique
    d-connecting path plus all off-path conditioning nodes have parents
    on the path or in K" fails in both directions:

    - chain 1 -> 2 -> 3 with 2 _||_ 3: the unique path is the edge, yet
      the trek through node 1 tops a second system and the minor is
      w1*l1_2^2*l2_3 + w2*l2_3;
    - 1 -> 5 <- 2, 5 -> 3, 5 -> 4 with 1 _||_ 2 | {3,4}: one path, all
      parent conditions hold, but the collider 5 can route to the
      conditioning set through 3 or through 4, two systems;
    - 1 -> 5 <- 2, 3 -> 4, 5 -> 4 with 1 _||_ 2 | {4}: node 4 has the
      off-path parent 3, yet the minor -w1*w2*l1_5*l2_5*l5_4^2 is a
      monomial because nodes 1 and 2 share no ancestor, which forces the
      crossing matching and leaves no room for a self-trek at 4.
    """
    i, j, K = model.single_extra().elementary()
    g = model.dag
    systems = trek_systems_nsi(g, {i} | K, {j} | K, max_count=2)
    return len(systems) == 1


def _lambda_edges(f: MvPoly) -> list[Edge]:
    mono, _ = monomial_factors(f)
    return sorted((v[1], v[2]) for v, _e in mono if v[0] == 1)


@dataclass(frozen=True)
class DecompositionResult:
    """Either a union of edge-deleted DAG models or a non-graphical report.

    For the union case ``graphs`` lists one DAG per deleted edge and
    ``residual`` is None.  Otherwise ``graphical_edges`` are the edges
    whose deletion gives genuine components (their lambda divides the
    minor) and ``residual`` is the minor divided by its monomial part.
    """

    graphs: tuple[Dag, ...]
    graphical_edges: tuple[Edge, ...]
    residual: MvPoly | None

    @property
    def is_union(self) -> bool:
        return self.residual is None


def decompose(model: AugmentedModel, sigma: SigmaMap | None = None) -> DecompositionResult:
    """Split the model into edge-deleted DAG models when the minor is a monomial.

    Omega factors of the monomial contribute nothing (they never vanish on
    the parameter space) and are dropped.  When the minor is not a
    monomial, the lambda part of its common monomial factor still names
    the edges whose deletions are components; the multi-term cofactor is
    reported as the residual.
    """
    i, j, K = model.single_extra().elementary()
    minor = ci_minor(model.dag, i, j, K, sigma)
    edges = _lambda_edges(minor)
    if minor.is_monomial():
        graphs = tuple(model.dag.delete_edge(e) for e in edges)
        return DecompositionResult(graphs, tuple(edges), None)
    _, residual = monomial_factors(minor)
    return DecompositionResult((), tuple(edges), residual)


def exact_components(
    model: AugmentedModel,
    sigma: SigmaMap | None = None,
    images: Mapping[frozenset[int], MvPoly] | None = None,
) -> tuple[Dag, ...] | None:
    """Edge-deleted DAGs whose model union equals the augmented model, or None.

    Works on the saturated minor: factors shared with principal-minor
    images never vanish on the parameter space, so when the saturation is
    a monomial the model is exactly the union of the lambda-edge deletions
    (an empty tuple means the extra statement holds nowhere on the model).
    None means a genuinely multi-term residual survives saturation.
    """
    i, j, K = model.single_extra().elementary()
    if sigma is None:
        sigma = phi_sigma(model.dag)
    sat = saturate(ci_minor(model.dag, i, j, K, sigma), model.dag, images)
    if not sat.is_monomial():
        return None
    return tuple(model.dag.delete_edge(e) for e in _lambda_edges(sat))


def implies_via_union(dags: Sequence[Dag], query: CiStatement) -> bool:
    """Whether the query is d-separated in every DAG of a model union."""
    if not dags:
        raise ValueError("empty union")
    for g in dags:
        query.validate_nodes(g)
    return all(d_separated(g, query.A, query.B, query.C) for g in dags)


# -- iterative decomposition ------------------------------------------------------


@dataclass(frozen=True)
class IterativeResult:
    """Union of DAGs, or a stuck report naming the blocking statement.

    ``stuck_at`` is the index into the statement list, ``partial`` the
    candidate DAGs as they stood when that statement was reached.
    """

    graphs: tuple[Dag, ...]
    stuck_at: int | None = None
    partial: tuple[Dag, ...] = ()

    @property
    def is_union(self) -> bool:
        return self.stuck_at is None


def _absorb(dags: Iterable[Dag]) -> tuple[Dag, ...]:
    """Dedup by edge set and drop graphs whose edges are a subset of another's."""
    unique: dict[frozenset[Edge], Dag] = {}
    for g in dags:
        unique.setdefault(g.edges, g)
    kept = [g for es, g in unique.items() if not any(es < other for other in unique)]
    return tuple(sorted(kept, key=lambda g: g.sorted_edges()))


def iterative_decompose(g: Dag, extras: Sequence[CiStatement]) -> IterativeResult:
    """Fold several extra statements into a union of DAG models.

    Per statement: keep candidate DAGs in which it already holds by
    d-separation, replace the others by their exact components.  Components
    are deduplicated and edge-subset graphs absorbed into their supersets
    after every step.  When some candidate has no exact decomposition the
    procedure stops and reports the statement it got stuck on.
    """
    candidates: tuple[Dag, ...] = (g,)
    for idx, stmt in enumerate(extras):
        stmt.validate_nodes(g)
        if not stmt.is_elementary:
            raise ValueError(f"statement {stmt} is not elementary")
        a, b, C = stmt.elementary()
        nxt: list[Dag] = []
        for cand in candidates:
            if d_separated(cand, {a}, {b}, C):
                nxt.append(cand)
                continue
            comps = exact_components(AugmentedModel(cand, stmt))
            if comps is None:
                return IterativeResult((), stuck_at=idx, partial=candidates)
            nxt.extend(comps)
        candidates = _absorb(nxt)
    return IterativeResult(candidates)
