"""Where do the covariance matrices live that satisfy one extra independence?

Adding a conditional independence statement that the graph does not
already imply carves a subset out of the graphical model.  When the
almost-principal minor of the statement maps to a monomial, that subset
is a finite union of edge-deleted submodels; otherwise at least one
component is not a graphical model at all.
"""

from gaussci import (
    AugmentedModel,
    CiStatement,
    Dag,
    ci_minor,
    decompose,
    implies_via_union,
    is_graphical_algebraic,
    is_graphical_graphical,
    saturate,
)

g = Dag(5, [(1, 2), (2, 4), (3, 4), (3, 5), (4, 5)])

# Case 1: conditioning on 4 connects 1 and 5 through the collider, and
# the minor degenerates to a single monomial.
extra = CiStatement({1}, {5}, {4})
model = AugmentedModel(g, extra)
minor = ci_minor(g, 1, 5, [4])
print(f"minor of 1 _||_ 5 | 4: {minor}")
print("algebraic test says graphical:", is_graphical_algebraic(model))
print("combinatorial test agrees:   ", is_graphical_graphical(model))

result = decompose(model)
print(f"the model splits into {len(result.graphs)} edge-deleted models:")
for edge, comp in zip(result.graphical_edges, result.graphs):
    print(f"  drop {edge[0]}->{edge[1]}:",
          ", ".join(f"{a}->{b}" for a, b in comp.sorted_edges()))

# Statements over the union are decided by d-separation in each part.
# The added statement itself holds everywhere, the unconditional version
# does not: the component that drops 3 -> 4 keeps the path through 4.
print("1 _||_ 5 | 4 holds on every component:",
      implies_via_union(result.graphs, CiStatement({1}, {5}, {4})))
print("1 _||_ 5 holds on every component:  ",
      implies_via_union(result.graphs, CiStatement({1}, {5}, ())))
print()

# Case 2: conditioning on 5 leaves a sum that no edge deletion explains.
extra = CiStatement({1}, {2}, {5})
model = AugmentedModel(g, extra)
minor = ci_minor(g, 1, 2, [5])
print(f"minor of 1 _||_ 2 | 5: {minor}")
result = decompose(model)
print("union of graphical models:", result.is_union)
print("edges that do give components:", result.graphical_edges)
print("leftover non-graphical factor:", result.residual)

# Saturation strips the factors that never vanish on positive definite
# matrices; what survives is the actual constraint, here a single edge.
print("saturated minor:", saturate(minor, g))
