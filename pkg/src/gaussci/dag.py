"""Directed acyclic graphs with 1-based nodes, d-separation and treks.

Nodes are the integers 1..n.  Edges are ordered pairs (a, b) meaning a -> b.
All graph-walking helpers treat node sets as Python sets of ints and return
deterministic (sorted) output so results are reproducible across runs.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class CycleError(ValueError):
    """Raised when an edge relation that should be acyclic contains a cycle."""


Edge = tuple[int, int]


def _toposort(n: int, children: dict[int, set[int]]) -> list[int]:
    """Kahn topological sort, smallest node first among ties."""
    indeg = {v: 0 for v in range(1, n + 1)}
    for v, out in children.items():
        for w in out:
            indeg[w] += 1
    import heapq

    heap = [v for v in range(1, n + 1) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in sorted(children.get(v, ())):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != n:
        raise CycleError("edge relation contains a directed cycle")
    return order


@dataclass(frozen=True)
class Dag:
    """Immutable labeled DAG on nodes 1..n.

    Construction validates node bounds, rejects self loops and rejects
    cyclic edge relations (raising :class:`CycleError`).
    """

    n: int
    edges: frozenset[Edge]
    _parents: dict[int, set[int]] = field(
        init=False, repr=False, compare=False, hash=False, default=None
    )
    _children: dict[int, set[int]] = field(
        init=False, repr=False, compare=False, hash=False, default=None
    )
    _order: tuple[int, ...] = field(
        init=False, repr=False, compare=False, hash=False, default=None
    )

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 1:
            raise ValueError("need at least one node")
        edges = frozenset((int(a), int(b)) for a, b in edges)
        for a, b in edges:
            if not (1 <= a <= n and 1 <= b <= n):
                raise ValueError(f"edge ({a}, {b}) outside 1..{n}")
            if a == b:
                raise ValueError(f"self loop at node {a}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", edges)
        parents: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
        children: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
        for a, b in edges:
            parents[b].add(a)
            children[a].add(b)
        object.__setattr__(self, "_parents", parents)
        object.__setattr__(self, "_children", children)
        object.__setattr__(self, "_order", tuple(_toposort(n, children)))

    # -- basic accessors ---------------------------------------------------

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    def topological_order(self) -> tuple[int, ...]:
        """Topological order, smallest node first among ties."""
        return self._order

    def parents(self, v: int) -> set[int]:
        self._check_node(v)
        return set(self._parents[v])

    def children(self, v: int) -> set[int]:
        self._check_node(v)
        return set(self._children[v])

    def ancestors(self, v: int) -> set[int]:
        """Strict ancestors of v (v itself excluded)."""
        return self._reach(v, self._parents) - {v}

    def descendants(self, v: int) -> set[int]:
        """Strict descendants of v (v itself excluded)."""
        return self._reach(v, self._children) - {v}

    def ancestors_inclusive(self, v: int) -> set[int]:
        return self._reach(v, self._parents)

    def descendants_inclusive(self, v: int) -> set[int]:
        return self._reach(v, self._children)

    def _reach(self, v: int, step: dict[int, set[int]]) -> set[int]:
        self._check_node(v)
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in step[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    def _check_node(self, v: int) -> None:
        if not (1 <= v <= self.n):
            raise ValueError(f"node {v} outside 1..{self.n}")

    def delete_edge(self, edge: Edge) -> "Dag":
        """Copy of the graph without the given edge; the edge must exist."""
        edge = (int(edge[0]), int(edge[1]))
        if edge not in self.edges:
            raise ValueError(f"edge {edge[0]} -> {edge[1]} not in graph")
        return Dag(self.n, self.edges - {edge})

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        body = ", ".join(f"{a}->{b}" for a, b in self.sorted_edges())
        return f"Dag(n={self.n}, [{body}])"


# -- d-separation ----------------------------------------------------------


def _validate_triple(g: Dag, A: set[int], B: set[int], C: set[int]) -> None:
    for S in (A, B, C):
        for v in S:
            g._check_node(v)
    if not A or not B:
        raise ValueError("both endpoint sets must be nonempty")
    if A & B or A & C or B & C:
        raise ValueError("endpoint and conditioning sets must be disjoint")


def d_separated(g: Dag, A: Iterable[int], B: Iterable[int], C: Iterable[int]) -> bool:
    """Decide whether C d-separates A from B in g.

    Linear-time reachability over (node, direction) states: a traversal may
    pass a non-collider not in C, and may pass a collider only if the
    collider has a descendant in C (itself included).

    Parameters
    ----------
    g : Dag
    A, B, C : iterables of nodes; A and B nonempty, all three pairwise
        disjoint (violations raise ValueError).
    """
    A, B, C = set(A), set(B), set(C)
    _validate_triple(g, A, B, C)

    # Nodes with a descendant in C (inclusive): exactly the ancestors of C.
    anc_c = set(C)
    queue = deque(C)
    while queue:
        v = queue.popleft()
        for p in g._parents[v]:
            if p not in anc_c:
                anc_c.add(p)
                queue.append(p)

    # Direction encodes how the trail reaches a node: True = from a child
    # (pointing up), False = from a parent (pointing down).
    visited: set[tuple[int, bool]] = set()
    queue = deque((a, True) for a in A)
    while queue:
        v, up = queue.popleft()
        if (v, up) in visited:
            continue
        visited.add((v, up))
        if v in B:
            return False
        if up:
            if v not in C:
                for p in g._parents[v]:
                    queue.append((p, True))
                for c in g._children[v]:
                    queue.append((c, False))
        else:
            if v not in C:
                for c in g._children[v]:
                    queue.append((c, False))
            if v in anc_c:
                for p in g._parents[v]:
                    queue.append((p, True))
    return True


def d_connecting_paths(
    g: Dag, i: int, j: int, K: Iterable[int]
) -> list[tuple[int, ...]]:
    """All simple paths between i and j that are d-connecting given K.

    A path is d-connecting when every internal non-collider lies outside K
    and every internal collider is in K or has a descendant in K.  Paths are
    returned as node tuples from i to j in lexicographic order.  Intended
    for small graphs (enumeration is exponential in general).
    """
    K = set(K)
    _validate_triple(g, {i}, {j}, K)

    # Inclusive "has a descendant in K" marks, precomputed once.
    open_collider = set(K)
    queue = deque(K)
    while queue:
        v = queue.popleft()
        for p in g._parents[v]:
            if p not in open_collider:
                open_collider.add(p)
                queue.append(p)

    neighbors: dict[int, list[int]] = {v: [] for v in g.nodes}
    for a, b in g.edges:
        neighbors[a].append(b)
        neighbors[b].append(a)
    for v in neighbors:
        neighbors[v].sort()

    out: list[tuple[int, ...]] = []
    path = [i]
    on_path = {i}

    def blocked(prev: int, mid: int, nxt: int) -> bool:
        is_collider = (prev, mid) in g.edges and (nxt, mid) in g.edges
        if is_collider:
            return mid not in open_collider
        return mid in K

    def extend(v: int) -> None:
        for w in neighbors[v]:
            if w in on_path:
                continue
            if len(path) >= 2 and blocked(path[-2], v, w):
                continue
            if w == j:
                out.append(tuple(path) + (j,))
                continue
            path.append(w)
            on_path.add(w)
            extend(w)
            path.pop()
            on_path.remove(w)

    extend(i)
    return out


def edge_on_all_connecting_paths(
    g: Dag, i: int, j: int, K: Iterable[int], edge: Edge
) -> bool | None:
    """Whether the directed edge a -> b lies on every d-connecting path.

    Returns None when there is no d-connecting path at all (the vacuous
    case, distinct from both True and False).  The edge counts as traversed
    whichever way the path walks through it.
    """
    a, b = edge
    if (a, b) not in g.edges:
        raise ValueError(f"edge {a} -> {b} not in graph")
    paths = d_connecting_paths(g, i, j, K)
    if not paths:
        return None
    for p in paths:
        hit = any(
            (p[t], p[t + 1]) == (a, b) or (p[t], p[t + 1]) == (b, a)
            for t in range(len(p) - 1)
        )
        if not hit:
            return False
    return True


# -- treks -----------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Trek:
    """A trek: two directed paths out of a common top node.

    ``left`` runs from the top to the trek's source-side endpoint, ``right``
    from the top to the target-side endpoint.  A one-node path means the
    corresponding side is empty.  The two sides may share nodes (treks need
    not be simple).
    """

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        if not self.left or not self.right or self.left[0] != self.right[0]:
            raise ValueError("both sides of a trek must start at the same top")

    @property
    def top(self) -> int:
        return self.left[0]

    @property
    def source(self) -> int:
        return self.left[-1]

    @property
    def target(self) -> int:
        return self.right[-1]


def _directed_paths(g: Dag, s: int, t: int) -> list[tuple[int, ...]]:
    """All directed paths s -> ... -> t (node tuples), sorted."""
    if s == t:
        return [(s,)]
    out: list[tuple[int, ...]] = []
    stack = [(s,)]
    while stack:
        path = stack.pop()
        for w in sorted(g._children[path[-1]], reverse=True):
            if w == t:
                out.append(path + (w,))
            else:
                stack.append(path + (w,))
    return sorted(out)


def enumerate_treks(g: Dag, i: int, j: int) -> list[Trek]:
    """All treks from i to j, sorted by (left, right) node sequences.

    Treks from i to i include the empty trek at i and every non-simple
    trek i <- p -> i through a common ancestor.
    """
    g._check_node(i)
    g._check_node(j)
    tops = g.ancestors_inclusive(i) & g.ancestors_inclusive(j)
    out = []
    for s in sorted(tops):
        for left in _directed_paths(g, s, i):
            for right in _directed_paths(g, s, j):
                out.append(Trek(left, right))
    return sorted(out)


# -- text format -----------------------------------------------------------


def format_dag(g: Dag) -> str:
    """Canonical text form: ``n <count>`` then one ``a -> b`` line per edge."""
    lines = [f"n {g.n}"]
    lines.extend(f"{a} -> {b}" for a, b in g.sorted_edges())
    return "\n".join(lines) + "\n"


def parse_dag(text: str) -> Dag:
    """Parse the text graph format; inverse of :func:`format_dag`.

    Comments start with ``#`` and blank lines are skipped.  Rejects
    malformed lines, out-of-range nodes, duplicate edges and cycles.
    """
    n = None
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit():
                raise ValueError(f"line {lineno}: expected 'n <count>', got {raw!r}")
            n = int(parts[1])
            continue
        parts = line.split()
        if len(parts) != 3 or parts[1] != "->":
            raise ValueError(f"line {lineno}: expected 'a -> b', got {raw!r}")
        try:
            a, b = int(parts[0]), int(parts[2])
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer node in {raw!r}") from None
        if (a, b) in seen:
            raise ValueError(f"line {lineno}: duplicate edge {a} -> {b}")
        seen.add((a, b))
        edges.append((a, b))
    if n is None:
        raise ValueError("missing 'n <count>' header line")
    return Dag(n, edges)


# -- enumeration and sampling ----------------------------------------------


def enumerate_dags(n: int) -> Iterator[Dag]:
    """Yield every labeled DAG on nodes 1..n.

    Iterates the 3^C(n,2) orientation choices (absent / a->b / b->a) per
    unordered pair and keeps the acyclic ones.  Practical for n <= 5
    (59049 candidates); guard larger inputs at the call site.
    """
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for choice in itertools.product((0, 1, 2), repeat=len(pairs)):
        edges = []
        for (a, b), c in zip(pairs, choice):
            if c == 1:
                edges.append((a, b))
            elif c == 2:
                edges.append((b, a))
        try:
            yield Dag(n, edges)
        except CycleError:
            continue


def random_dag(n: int, rng, edge_prob: float = 0.5) -> Dag:
    """Random DAG: random topological order, then independent edge coins.

    ``rng`` is a numpy Generator.  Not uniform over DAGs, but covers all of
    them with positive probability; good enough for randomized sweeps.
    """
    order = list(rng.permutation(n) + 1)
    edges = []
    for s in range(n):
        for t in range(s + 1, n):
            if rng.random() < edge_prob:
                edges.append((int(order[s]), int(order[t])))
    return Dag(n, edges)
