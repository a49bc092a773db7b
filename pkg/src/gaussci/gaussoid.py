"""Gaussoid axioms, branching closure, and the four-node conjecture check.

Elementary conditional independence statements over nodes 1..n are closed
under the gaussoid inference rules.  Three of the rules are Horn clauses
and are applied to a fixpoint; the weak transitivity rule concludes a
disjunction, so closure branches.  Statement sets are interned as bitmasks
over the universe of all elementary statements, which keeps the closure a
few integer operations per rule.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .dag import Dag, d_separated, enumerate_dags
from .errors import GuardError
from .implication import CiStatement
from .poly import MvPoly, divides
from .trek import ci_minor, phi_sigma, principal_minor_images, saturate

Structure = frozenset[CiStatement]

_MAX_CLOSE_N = 6


def _elementary_universe(n: int) -> list[tuple[int, int, frozenset[int]]]:
    nodes = range(1, n + 1)
    out = []
    for i, j in combinations(nodes, 2):
        rest = [v for v in nodes if v not in (i, j)]
        for r in range(len(rest) + 1):
            for L in combinations(rest, r):
                out.append((i, j, frozenset(L)))
    return out


@lru_cache(maxsize=None)
def _tables(n: int):
    """Statement universe, index map and axiom instances as bitmasks."""
    universe = _elementary_universe(n)
    index = {(i, j, L): p for p, (i, j, L) in enumerate(universe)}

    def bit(a: int, b: int, L: Iterable[int]) -> int:
        i, j = (a, b) if a < b else (b, a)
        return 1 << index[(i, j, frozenset(L))]

    horn: set[tuple[int, int]] = set()
    branching: set[tuple[int, int, int]] = set()
    nodes = range(1, n + 1)
    for i in nodes:
        for j in nodes:
            for k in nodes:
                if len({i, j, k}) != 3:
                    continue
                rest = [v for v in nodes if v not in (i, j, k)]
                for r in range(len(rest) + 1):
                    for L in combinations(rest, r):
                        L = set(L)
                        ij, ik = bit(i, j, L), bit(i, k, L)
                        ij_k, ik_j = bit(i, j, L | {k}), bit(i, k, L | {j})
                        jk = bit(j, k, L)
                        horn.add((ij | ik_j, ik | ij_k))
                        horn.add((ij_k | ik_j, ij | ik))
                        horn.add((ij | ik, ij_k | ik_j))
                        a, b = sorted((ik, jk))
                        branching.add((ij | ij_k, a, b))
    return universe, index, sorted(horn), sorted(branching)


def _to_mask(statements: Iterable[CiStatement], n: int) -> int:
    _, index, _, _ = _tables(n)
    mask = 0
    for s in statements:
        i, j, L = s.elementary()
        key = (i, j, L) if i < j else (j, i, L)
        if key not in index:
            raise ValueError(f"statement {s} is not over nodes 1..{n}")
        mask |= 1 << index[key]
    return mask


def _from_mask(mask: int, n: int) -> Structure:
    universe, _, _, _ = _tables(n)
    out = []
    p = 0
    while mask:
        if mask & 1:
            i, j, L = universe[p]
            out.append(CiStatement({i}, {j}, L))
        mask >>= 1
        p += 1
    return frozenset(out)


def _fix_horn(mask: int, horn: Sequence[tuple[int, int]]) -> int:
    changed = True
    while changed:
        changed = False
        for prem, concl in horn:
            if mask & prem == prem and mask | concl != mask:
                mask |= concl
                changed = True
    return mask


class _Closer:
    """Branching closure over the statement universe for one fixed n."""

    def __init__(self, n: int):
        _, _, self.horn, self.branching = _tables(n)
        self.n = n
        self._memo: dict[int, tuple[int, ...]] = {}

    def leaves(self, mask: int) -> tuple[int, ...]:
        mask = _fix_horn(mask, self.horn)
        cached = self._memo.get(mask)
        if cached is not None:
            return cached
        result: tuple[int, ...] = (mask,)
        for prem, a, b in self.branching:
            if mask & prem == prem and not mask & a and not mask & b:
                merged = set(self.leaves(mask | a)) | set(self.leaves(mask | b))
                result = tuple(sorted(merged))
                break
        self._memo[mask] = result
        return result


@lru_cache(maxsize=8)
def _closer(n: int) -> _Closer:
    return _Closer(n)


def _minimal(leaves: Sequence[int]) -> list[int]:
    return [m for m in leaves if not any(o != m and o & m == o for o in leaves)]


@lru_cache(maxsize=8)
def _perm_remaps(n: int) -> tuple[tuple[int, ...], ...]:
    """Positional action of every node permutation on the statement universe."""
    universe, index, _, _ = _tables(n)
    remaps = []
    for perm in permutations(range(1, n + 1)):
        relabel = {v: perm[v - 1] for v in range(1, n + 1)}
        remap = []
        for i, j, L in universe:
            a, b = sorted((relabel[i], relabel[j]))
            remap.append(index[(a, b, frozenset(relabel[c] for c in L))])
        remaps.append(tuple(remap))
    return tuple(remaps)


def _permute_mask(mask: int, remap: tuple[int, ...]) -> int:
    out = 0
    p = 0
    while mask:
        if mask & 1:
            out |= 1 << remap[p]
        mask >>= 1
        p += 1
    return out


def _closure_signature(leaves: Sequence[int], n: int) -> tuple[int, ...]:
    """Relabeling-invariant form of a minimal-leaf family.

    Two statement sets are equivalent under the gaussoid axioms up to
    symmetry exactly when their signatures coincide: the axioms commute
    with node relabeling, so permuting the inputs permutes the minimal
    closed supersets, and the signature takes the least such family.
    """
    minimal = _minimal(leaves)
    best = None
    for remap in _perm_remaps(n):
        sig = tuple(sorted(_permute_mask(m, remap) for m in minimal))
        if best is None or sig < best:
            best = sig
    return best


@dataclass(frozen=True)
class ClosureResult:
    """Minimal closed structures satisfying every axiom, and their intersection.

    Every branch extends the input, is closed under the Horn rules and
    satisfies all weak-transitivity instances.  Non-minimal leaves of the
    branching search are dropped, which makes the branch list independent
    of the order in which disjunctions were resolved.  ``common`` holds
    the statements derivable no matter how the disjunctions resolve.
    """

    branches: tuple[Structure, ...]
    common: Structure


def close(statements: Iterable[CiStatement], n: int) -> ClosureResult:
    """Close a set of elementary statements under the gaussoid axioms."""
    if n > _MAX_CLOSE_N:
        raise GuardError(f"closure supports n <= {_MAX_CLOSE_N}, got {n}")
    closer = _closer(n)
    minimal = _minimal(closer.leaves(_to_mask(statements, n)))
    common = minimal[0]
    for m in minimal[1:]:
        common &= m
    branches = tuple(
        sorted((_from_mask(m, n) for m in minimal), key=_structure_key)
    )
    return ClosureResult(branches, _from_mask(common, n))


def _statement_key(s: CiStatement):
    i, j, L = s.elementary()
    return (i, j, tuple(sorted(L)))


def _structure_key(struct: Structure):
    return tuple(sorted(_statement_key(s) for s in struct))


def glob_statements(g: Dag) -> Structure:
    """All elementary d-separation statements of a DAG."""
    if g.n > 10:
        raise GuardError("glob enumeration supports n <= 10")
    out = []
    nodes = range(1, g.n + 1)
    for i, j in combinations(nodes, 2):
        rest = [v for v in nodes if v not in (i, j)]
        for r in range(len(rest) + 1):
            for L in combinations(rest, r):
                if d_separated(g, {i}, {j}, L):
                    out.append(CiStatement({i}, {j}, L))
    return frozenset(out)


glob = glob_statements


def canonical_form(struct: Structure, n: int) -> Structure:
    """Lexicographically minimal relabeling of a structure over nodes 1..n."""
    if n > 8:
        raise GuardError("canonical form supports n <= 8")
    best = None
    best_key = None
    for perm in permutations(range(1, n + 1)):
        relabel = {v: perm[v - 1] for v in range(1, n + 1)}
        mapped = frozenset(
            CiStatement(
                {relabel[next(iter(s.A))]},
                {relabel[next(iter(s.B))]},
                {relabel[c] for c in s.C},
            )
            for s in struct
        )
        key = _structure_key(mapped)
        if best_key is None or key < best_key:
            best, best_key = mapped, key
    return best if best is not None else frozenset()


def exceptional_structures_n4() -> tuple[Structure, ...]:
    """The five four-node structures whose closure is not realized by any DAG."""

    def s(i, j, *L):
        return CiStatement({i}, {j}, L)

    return (
        frozenset({s(1, 2, 3), s(1, 3, 4), s(1, 4, 2)}),
        frozenset({s(1, 2), s(1, 2, 3, 4), s(3, 4, 1), s(3, 4, 2)}),
        frozenset({s(1, 2), s(1, 3, 2, 4), s(2, 4, 1, 3), s(3, 4)}),
        frozenset({s(1, 2, 3), s(1, 3, 4), s(2, 4, 1), s(3, 4, 2)}),
        frozenset({s(1, 2), s(1, 3, 2, 4), s(2, 4, 3), s(3, 4, 1)}),
    )


@dataclass(frozen=True)
class ConjectureCase:
    """One violating (DAG, extra statement) pair, with the uncovered statements."""

    edges: tuple[tuple[int, int], ...]
    extra: CiStatement
    missing: tuple[CiStatement, ...]


@dataclass(frozen=True)
class ConjectureReport:
    """Outcome of the four-node closure-completeness check.

    violations: cases where an exactly implied statement escaped the
    common gaussoid closure.  exceptional_matches: (DAG, extra) pairs
    whose augmented structure is axiom-equivalent to one of the five
    exceptional structures up to relabeling.  subset_matches: DAGs whose
    d-separation structure is axiom-equivalent to an exceptional
    structure with one statement removed.  All three are expected empty.
    """

    n_dags: int
    n_cases: int
    violations: tuple[ConjectureCase, ...]
    exceptional_matches: tuple[tuple[int, tuple[tuple[int, int], ...], str], ...]
    subset_matches: tuple[tuple[int, str, tuple[tuple[int, int], ...]], ...]
    seconds: float

    @property
    def ok(self) -> bool:
        return (
            not self.violations
            and not self.exceptional_matches
            and not self.subset_matches
        )

    def summary(self) -> str:
        status = "ok" if self.ok else "FAILED"
        return (
            f"{status}: {self.n_dags} dags, {self.n_cases} extras checked, "
            f"{len(self.violations)} violations, "
            f"{len(self.exceptional_matches)} exceptional-equivalent cases, "
            f"{len(self.subset_matches)} exceptional subset matches "
            f"({self.seconds:.1f}s)"
        )


def verify_conjecture_n4(progress: bool = False, record=None) -> ConjectureReport:
    """Check gaussoid-closure completeness for one extra statement at n = 4.

    For every labeled DAG on four nodes and every elementary statement not
    already d-separated, the set of statements implied by the augmented
    model (decided exactly) must be contained in the common part of the
    gaussoid closure of the d-separation statements plus the extra.

    Additionally reproduces the direct check behind that completeness:
    no augmented structure is axiom-equivalent to one of the five
    exceptional structures up to relabeling, and no DAG's d-separation
    structure is axiom-equivalent to an exceptional structure with one
    statement removed.

    record, when given, is called once per case with (edges, extra,
    implied statements, common-closure statements, violation flag).
    """
    n = 4
    start = time.monotonic()
    universe, _, _, _ = _tables(n)
    closer = _closer(n)
    all_stmts = [CiStatement({i}, {j}, L) for i, j, L in universe]

    exc_structs = exceptional_structures_n4()
    exc_sigs = {}
    for e_idx, exc in enumerate(exc_structs):
        exc_sigs[_closure_signature(closer.leaves(_to_mask(exc, n)), n)] = e_idx
    exc_profiles = {
        tuple(sorted(m.bit_count() for m in sig)) for sig in exc_sigs
    }

    violations: list[ConjectureCase] = []
    exceptional_matches: list[tuple[int, tuple, str]] = []
    glob_sigs: dict[tuple[int, ...], tuple] = {}
    n_cases = 0
    dags = list(enumerate_dags(n))
    for count, g in enumerate(dags, 1):
        if progress and count % 50 == 0:
            print(f"  dag {count}/{len(dags)}")
        glob_mask = 0
        for p, (i, j, L) in enumerate(universe):
            if d_separated(g, {i}, {j}, L):
                glob_mask |= 1 << p
        edges = tuple(g.sorted_edges())
        glob_sigs.setdefault(
            _closure_signature(closer.leaves(glob_mask), n), edges
        )

        sigma = phi_sigma(g)
        images = principal_minor_images(g, sigma)
        sat: dict[int, MvPoly] = {}
        non_glob = [p for p in range(len(universe)) if not glob_mask >> p & 1]
        for p in non_glob:
            i, j, L = universe[p]
            sat[p] = saturate(ci_minor(g, i, j, sorted(L), sigma), g, images)

        for p in non_glob:
            n_cases += 1
            implied_mask = glob_mask | 1 << p
            for q in non_glob:
                if q != p and divides(sat[p], sat[q]):
                    implied_mask |= 1 << q
            leaves = closer.leaves(glob_mask | 1 << p)
            common = leaves[0]
            for m in leaves[1:]:
                common &= m
            uncovered = implied_mask & ~common
            if uncovered:
                violations.append(
                    ConjectureCase(
                        edges,
                        all_stmts[p],
                        tuple(
                            all_stmts[q]
                            for q in range(len(universe))
                            if uncovered >> q & 1
                        ),
                    )
                )
            if record is not None:
                record(
                    edges,
                    all_stmts[p],
                    tuple(
                        all_stmts[q] for q in range(len(universe))
                        if implied_mask >> q & 1
                    ),
                    tuple(
                        all_stmts[q] for q in range(len(universe))
                        if common >> q & 1
                    ),
                    bool(uncovered),
                )
            minimal = _minimal(leaves)
            profile = tuple(sorted(m.bit_count() for m in minimal))
            if profile in exc_profiles:
                sig = _closure_signature(minimal, n)
                if sig in exc_sigs:
                    exceptional_matches.append(
                        (exc_sigs[sig], edges, str(all_stmts[p]))
                    )

    subset_matches = []
    for e_idx, exc in enumerate(exc_structs):
        for drop in sorted(exc, key=_statement_key):
            sub = exc - {drop}
            sig = _closure_signature(closer.leaves(_to_mask(sub, n)), n)
            if sig in glob_sigs:
                subset_matches.append((e_idx, str(drop), glob_sigs[sig]))

    return ConjectureReport(
        n_dags=len(dags),
        n_cases=n_cases,
        violations=tuple(violations),
        exceptional_matches=tuple(exceptional_matches),
        subset_matches=tuple(subset_matches),
        seconds=time.monotonic() - start,
    )
