"""Trek-rule covariances, minors, saturation and trek systems."""

from collections import Counter

import pytest

from gaussci.dag import Dag, Trek
from gaussci.errors import GuardError
from gaussci.poly import MvPoly, divides, lambda_var, omega_var
from gaussci.trek import (
    ci_minor,
    phi_minor,
    phi_sigma,
    principal_minor_images,
    saturate,
    sigma_entry,
    trek_monomial,
    trek_rule_sigma,
    trek_system_monomial,
    trek_systems_nsi,
)

FIG = Dag(5, [(1, 2), (2, 4), (3, 4), (3, 5), (4, 5)])


def test_sigma_entries_golden():
    sigma = phi_sigma(FIG)
    assert str(sigma[(1, 4)]) == "w1*l1_2*l2_4"
    assert str(sigma[(5, 5)]) == (
        "w1*l1_2^2*l2_4^2*l4_5^2 + w2*l2_4^2*l4_5^2 + w3*l3_4^2*l4_5^2"
        " + 2*w3*l3_4*l3_5*l4_5 + w3*l3_5^2 + w4*l4_5^2 + w5"
    )
    assert sigma_entry(sigma, 4, 1) == sigma[(1, 4)]


def test_sigma_matches_trek_enumeration():
    for g in (FIG, Dag(4, [(1, 2), (1, 3), (2, 4), (3, 4)])):
        sigma = phi_sigma(g)
        for i in g.nodes:
            for j in range(i, g.n + 1):
                assert sigma[(i, j)] == trek_rule_sigma(g, i, j)


def test_trek_monomial():
    t = Trek((3, 4), (3, 5))
    m = trek_monomial(t)
    assert m == (
        MvPoly.variable(omega_var(3))
        * MvPoly.variable(lambda_var(3, 4))
        * MvPoly.variable(lambda_var(3, 5))
    )


def test_ci_minor_goldens():
    assert str(ci_minor(FIG, 1, 5, [4])) == "w1*w3*l1_2*l2_4*l3_4*l3_5"
    assert str(ci_minor(FIG, 2, 4, [5])) == (
        "w1*w3*l1_2^2*l2_4*l3_4*l3_5*l4_5 + w1*w3*l1_2^2*l2_4*l3_5^2"
        " + w2*w3*l2_4*l3_4*l3_5*l4_5 + w1*w5*l1_2^2*l2_4"
        " + w2*w3*l2_4*l3_5^2 + w2*w5*l2_4"
    )
    assert str(ci_minor(FIG, 1, 4, [5])) == (
        "w1*w3*l1_2*l2_4*l3_4*l3_5*l4_5 + w1*w3*l1_2*l2_4*l3_5^2"
        " + w1*w5*l1_2*l2_4"
    )
    with pytest.raises(ValueError):
        ci_minor(FIG, 1, 4, [4])
    with pytest.raises(ValueError):
        ci_minor(FIG, 4, 4, [])


def test_phi_minor_validation():
    with pytest.raises(ValueError):
        phi_minor(FIG, {1, 2}, {3})
    with pytest.raises(ValueError):
        phi_minor(FIG, set(), set())


def test_principal_minor_images():
    images = principal_minor_images(FIG)
    assert len(images) == 2**5 - 1
    sigma = phi_sigma(FIG)
    for v in FIG.nodes:
        assert images[frozenset({v})] == sigma[(v, v)]
    with pytest.raises(GuardError):
        principal_minor_images(Dag(13))


def test_saturation_goldens():
    sat = saturate(ci_minor(FIG, 2, 4, [5]), FIG)
    assert str(sat) == "w3*l2_4*l3_4*l3_5*l4_5 + w3*l2_4*l3_5^2 + w5*l2_4"
    # sigma_24 factors as l2_4 * sigma_22; the second factor is a
    # principal-minor image and is stripped completely.
    assert str(saturate(ci_minor(FIG, 2, 4, []), FIG)) == "l2_4"
    assert str(saturate(ci_minor(FIG, 1, 2, [5]), FIG)) == "l1_2"
    # Monomials keep only their lambda part.
    assert str(saturate(ci_minor(FIG, 1, 5, [4]), FIG)) == "l1_2*l2_4*l3_4*l3_5"


def test_saturation_properties():
    g = FIG
    images = principal_minor_images(g)
    for stmt in ((2, 4, [5]), (1, 4, [5]), (1, 5, [4]), (2, 5, [])):
        f = ci_minor(g, *stmt)
        sat = saturate(f, g, images)
        # Idempotent, primitive, positive leading coefficient, no omegas
        # unless a genuinely mixed factor survives.
        assert saturate(sat, g, images) == sat
        assert sat.content() == 1
        assert sat.leading()[1] > 0
    assert saturate(MvPoly.zero(), g, images).is_zero()


UPDOWN = Dag(
    9,
    [(1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (3, 7), (6, 7), (6, 8), (4, 8), (4, 9)],
)


def test_up_down_cycle_trek_systems():
    """Two distinct systems over one up-down cycle share a monomial."""
    systems = trek_systems_nsi(UPDOWN, {5, 7, 8}, {7, 8, 9})
    t = (Trek((3, 5), (3, 7)), Trek((6, 7), (6, 8)), Trek((4, 8), (4, 9)))
    t1 = (
        Trek((1, 3, 5), (1, 4, 9)),
        Trek((6, 7), (6, 8)),
        Trek((2, 4, 8), (2, 3, 7)),
    )
    t2 = (
        Trek((2, 3, 5), (2, 4, 9)),
        Trek((6, 7), (6, 8)),
        Trek((1, 4, 8), (1, 3, 7)),
    )
    assert len(systems) == 15
    assert t in systems and t1 in systems and t2 in systems
    assert trek_system_monomial(t1) == trek_system_monomial(t2)
    assert trek_system_monomial(t) != trek_system_monomial(t1)
    # t1 and t2 route the cycle 3 <- 1 -> 4 / 3 <- 2 -> 4 in the two
    # possible ways; no other pair of systems collides.
    counts = Counter(str(trek_system_monomial(s)) for s in systems)
    assert sorted(counts.values()) == [1] * 13 + [2]
    assert counts[str(trek_system_monomial(t1))] == 2

    # The shared monomial survives with coefficient -2 in the minor while
    # the lone systems keep unit coefficients; nothing cancels here.
    minor = phi_minor(UPDOWN, (5, 7, 8), (7, 8, 9))
    assert len(minor) == 14
    assert minor.coefficient(trek_system_monomial(t).leading()[0]) == 1
    assert minor.coefficient(trek_system_monomial(t1).leading()[0]) == -2


def test_trek_system_uniqueness_vs_monomial():
    # Unique system: the graphical case of the running example.
    assert len(trek_systems_nsi(FIG, {1, 4}, {5, 4})) == 1
    assert ci_minor(FIG, 1, 5, [4]).is_monomial()
    # Two systems: the chain's direct trek plus the detour through node 1.
    chain = Dag(3, [(1, 2), (2, 3)])
    systems = trek_systems_nsi(chain, {2}, {3})
    assert len(systems) == 2
    assert not ci_minor(chain, 2, 3, []).is_monomial()


def test_trek_systems_guard():
    with pytest.raises(GuardError):
        trek_systems_nsi(Dag(8), range(1, 8), range(1, 8))
    with pytest.raises(ValueError):
        trek_systems_nsi(FIG, {1, 2}, {3})


def test_max_count_caps_search():
    chain = Dag(3, [(1, 2), (2, 3)])
    assert len(trek_systems_nsi(chain, {2}, {3}, max_count=1)) == 1
