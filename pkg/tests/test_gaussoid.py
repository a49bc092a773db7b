"""Gaussoid closure, canonical forms and the exceptional structures."""

import pytest

from gaussci.dag import Dag, enumerate_dags
from gaussci.errors import GuardError
from gaussci.gaussoid import (
    canonical_form,
    close,
    exceptional_structures_n4,
    glob_statements,
)
from gaussci.implication import CiStatement, format_statement

FIG = Dag(5, [(1, 2), (2, 4), (3, 4), (3, 5), (4, 5)])


def s(i, j, *K):
    return CiStatement({i}, {j}, K)


def test_axiom_one_application():
    # From 2 _||_ 4 | 5 and the graph fact 1 _||_ 4 | {2,5}, the first
    # axiom (with i=4, j=2, k=1, L={5}) yields 1 _||_ 4 | 5 and
    # 2 _||_ 4 | {1,5}; nothing else follows and no branching occurs.
    result = close({s(2, 4, 5), s(1, 4, 2, 5)}, 5)
    assert len(result.branches) == 1
    assert sorted(format_statement(x) for x in result.common) == [
        "1 _||_ 4 | 5",
        "1 _||_ 4 | {2,5}",
        "2 _||_ 4 | 5",
        "2 _||_ 4 | {1,5}",
    ]


def test_closure_of_augmented_running_example():
    base = glob_statements(FIG)
    result = close(base | {s(2, 4, 5)}, 5)
    assert len(result.branches) == 1
    new = result.common - base - {s(2, 4, 5)}
    # 1 _||_ 4 | {2,5} also closes in but is already a separation of the
    # graph; the genuinely new consequences are these two.
    assert new == {s(1, 4, 5), s(2, 4, 1, 5)}


def test_dag_structures_are_closed():
    # d-separation satisfies all four axioms, weak transitivity included,
    # so the closure of any glob(G) is glob(G) itself on a single branch.
    for n in (2, 3, 4):
        for g in enumerate_dags(n):
            struct = glob_statements(g)
            result = close(struct, n)
            assert result.branches == (struct,)
            assert result.common == struct


def test_branching_example():
    # Weak transitivity alone: 1 _||_ 2 and 1 _||_ 2 | 3 force a choice
    # between 1 _||_ 3 and 2 _||_ 3.
    result = close({s(1, 2), s(1, 2, 3)}, 3)
    assert len(result.branches) == 2
    assert result.common & {s(1, 3), s(2, 3)} == set()
    union = set.union(*(set(b) for b in result.branches))
    assert s(1, 3) in union and s(2, 3) in union


def test_closure_monotone_and_idempotent():
    base = {s(2, 4, 5), s(1, 4, 2, 5)}
    result = close(base, 5)
    assert base <= result.common
    for branch in result.branches:
        again = close(branch, 5)
        assert again.branches == (branch,)


def test_exceptional_structures():
    structs = exceptional_structures_n4()
    assert len(structs) == 5
    # Pairwise inequivalent even after relabeling, and gaussoid-closed.
    forms = {canonical_form(e, 4) for e in structs}
    assert len(forms) == 5
    for e in structs:
        r = close(e, 4)
        assert r.branches == (e,)


def test_exceptional_structures_not_globs():
    # None of the five coincides with the d-separation structure of a DAG
    # (matching up to relabeling is ruled out in the four-node check).
    globs = {glob_statements(g) for g in enumerate_dags(4)}
    for e in exceptional_structures_n4():
        assert e not in globs


def test_semigraphoid_figure_glob():
    g = Dag(4, [(1, 3), (1, 4), (3, 2), (2, 4), (3, 4)])
    assert glob_statements(g) == {s(1, 2, 3)}
    # Its single statement extends to the first exceptional structure,
    # which needs two more statements, not one.
    assert s(1, 2, 3) in exceptional_structures_n4()[0]


def test_canonical_form_invariance():
    exc = exceptional_structures_n4()[3]
    perm = {1: 3, 2: 1, 3: 4, 4: 2}
    relabeled = frozenset(
        CiStatement(
            {perm[next(iter(x.A))]},
            {perm[next(iter(x.B))]},
            {perm[c] for c in x.C},
        )
        for x in exc
    )
    assert canonical_form(relabeled, 4) == canonical_form(exc, 4)
    assert canonical_form(canonical_form(exc, 4), 4) == canonical_form(exc, 4)


def test_guards():
    with pytest.raises(GuardError):
        close({s(1, 2)}, 7)
    with pytest.raises(GuardError):
        glob_statements(Dag(11))
    with pytest.raises(ValueError):
        close({s(1, 6)}, 5)
