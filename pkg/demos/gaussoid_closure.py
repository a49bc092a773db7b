"""Axiomatic reasoning about Gaussian conditional independence.

Gaussian CI structures obey three composition-style inference rules and
one disjunctive rule, weak transitivity.  Closing a set of statements
under these rules gives a cheap, purely combinatorial underbound on what
an added independence must imply.  On four nodes the closure recovers
every algebraic implication except in five exceptional structures.
"""

from gaussci import (
    CiStatement,
    Dag,
    close,
    exceptional_structures_n4,
    format_statement,
    glob_statements,
)

g = Dag(5, [(1, 2), (2, 4), (3, 4), (3, 5), (4, 5)])
base = glob_statements(g)
print(f"the graph satisfies {len(base)} elementary statements")

added = CiStatement({2}, {4}, {5})
result = close(base | {added}, 5)
new = result.common - base - {added}
print(f"closing with {format_statement(added)} added gives "
      f"{len(result.branches)} branch(es) and new consequences:")
for s in sorted(new, key=format_statement):
    print("  ", format_statement(s))
print()

# Weak transitivity is disjunctive: it may split the reasoning into
# branches, and only statements common to all branches are certain.
pair = {CiStatement({1}, {2}, ()), CiStatement({1}, {2}, {3})}
result = close(pair, 3)
print(f"closing {{1 _||_ 2, 1 _||_ 2 | 3}} on three nodes branches "
      f"{len(result.branches)} ways")
for branch in result.branches:
    print("  branch:", sorted(format_statement(s) for s in branch))
print("  common:", sorted(format_statement(s) for s in result.common))
print()

# The five four-node structures where axiomatic closure provably stays
# short of the full algebraic implication closure.
print("exceptional four-node structures:")
for k, struct in enumerate(exceptional_structures_n4(), 1):
    print(f"  {k}:", ", ".join(sorted(format_statement(s) for s in struct)))
