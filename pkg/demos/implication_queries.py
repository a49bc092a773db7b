"""Deciding which independences follow from an assumed one, exactly.

One conditional independence statement added to a DAG model can force
others that d-separation alone never would.  The decision runs on
saturated minors: if the saturation of the added statement divides the
saturation of the query, the query holds on all of the augmented model.
"""

from gaussci import (
    AugmentedModel,
    CiStatement,
    Dag,
    Verdict,
    format_statement,
    implication_witness,
    implies_exact,
    iterative_decompose,
)

g = Dag(5, [(1, 2), (2, 4), (3, 4), (3, 5), (4, 5)])


def report(extra, query):
    model = AugmentedModel(g, extra)
    verdict = implies_exact(model, query)
    tag = "implied" if verdict is Verdict.IMPLIED else "not implied"
    print(f"  {format_statement(extra)}  =>  {format_statement(query)}:  {tag}")
    return model, verdict


print("implication queries on the five-node graph:")
report(CiStatement({1}, {2}, {5}), CiStatement({1}, {4}, {5}))
report(CiStatement({2}, {4}, {5}), CiStatement({1}, {4}, {5}))
model, verdict = report(CiStatement({1}, {5}, {4}), CiStatement({2}, {5}, ()))
print()

# A negative verdict only rules out implication on the closure of the
# model.  A sampled SEM inside one decomposition component makes the
# failure concrete.
w = implication_witness(model, CiStatement({2}, {5}, ()), seed=1)
comp = ", ".join(f"{a}->{b}" for a, b in w.component.sorted_edges())
print("refutation witness found in component with edges", comp)
print(f"  partial correlation of (2,5) there: {w.rho:+.3f}")
print()

# Several statements can be folded in one after the other.  Every
# statement either already holds in a candidate graph or splits it, and
# the result does not depend on the order.
extras = [CiStatement({1}, {5}, {4}), CiStatement({1}, {2}, {5})]
for order in (extras, extras[::-1]):
    result = iterative_decompose(g, order)
    names = [" ".join(f"{a}->{b}" for a, b in c.sorted_edges())
             for c in result.graphs]
    print("order", [format_statement(s) for s in order])
    print("   ->", names)
