"""Exact polynomial arithmetic: ring laws, division, determinants."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussci.poly import (
    MvPoly,
    NotDivisible,
    PolyMatrix,
    determinant,
    divides,
    exact_divide,
    lambda_var,
    monomial_factors,
    omega_var,
)

W1, W2 = MvPoly.variable(omega_var(1)), MvPoly.variable(omega_var(2))
L12 = MvPoly.variable(lambda_var(1, 2))
L23 = MvPoly.variable(lambda_var(2, 3))


def test_text_form():
    assert str(MvPoly.zero()) == "0"
    assert str(MvPoly.constant(-3)) == "-3"
    assert str(W1) == "w1"
    assert str(L12) == "l1_2"
    f = W1 * L12 * L12 + W2.scale(-1)
    assert str(f) == "w1*l1_2^2 - w2"
    # Graded order: higher total degree first, omegas before lambdas.
    g = L12 + W1 * W2 + MvPoly.constant(5)
    assert str(g) == "w1*w2 + l1_2 + 5"


def test_basic_predicates():
    assert MvPoly.zero().is_zero()
    assert not MvPoly.zero().is_monomial()
    assert (W1 * L12).is_monomial()
    assert MvPoly.constant(4).is_constant()
    assert (W1 + W2).total_degree() == 1
    assert (W1 * W1 + L12).leading() == (((omega_var(1), 2),), 1)


# -- ring laws on randomized inputs ------------------------------------------

VARS = [omega_var(1), omega_var(2), lambda_var(1, 2), lambda_var(2, 3)]


@st.composite
def polys(draw):
    n_terms = draw(st.integers(0, 4))
    terms = {}
    for _ in range(n_terms):
        exps = draw(
            st.lists(st.tuples(st.sampled_from(VARS), st.integers(1, 2)), max_size=3)
        )
        mono = {}
        for v, e in exps:
            mono[v] = mono.get(v, 0) + e
        coef = draw(st.integers(-5, 5))
        terms[tuple(sorted(mono.items()))] = coef
    return MvPoly(terms)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_identities(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert (f - g) + g == f
    assert f + MvPoly.zero() == f
    assert f * MvPoly.constant(1) == f
    assert f * MvPoly.zero() == MvPoly.zero()


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_exact_divide_inverts_multiplication(f, g):
    if g.is_zero():
        return
    assert exact_divide(f * g, g) == f


def test_exact_divide_failures():
    with pytest.raises(ZeroDivisionError):
        exact_divide(W1, MvPoly.zero())
    with pytest.raises(NotDivisible):
        exact_divide(W1 + W2, W1)
    with pytest.raises(NotDivisible):
        exact_divide(W1, W1.scale(2))  # integer quotient required


def test_divides_is_content_insensitive():
    f = W1 + W2
    assert divides(f.scale(2), f.scale(3))
    assert divides(L12, W1 * L12 + W2 * L12)
    assert not divides(L23, W1 * L12)
    assert divides(MvPoly.zero(), MvPoly.zero())
    assert not divides(MvPoly.zero(), W1)


def test_power_and_content():
    f = W1 + W2
    assert f**0 == MvPoly.constant(1)
    assert f**3 == f * f * f
    g = (W1 + W2).scale(6)
    assert g.content() == 6
    assert g.primitive_part() == W1 + W2
    with pytest.raises(ValueError):
        f**-1


def test_monomial_factors():
    f = W1 * L12 * L12 + W1 * W2 * L12
    mono, cof = monomial_factors(f)
    assert MvPoly.term(mono) == W1 * L12
    assert cof == L12 + W2
    # No common factor: the trivial monomial.
    mono, cof = monomial_factors(W1 + W2)
    assert mono == ()
    assert cof == W1 + W2
    with pytest.raises(ValueError):
        monomial_factors(MvPoly.zero())


def test_evaluate():
    f = W1 * L12 * L12 + W2.scale(-2)
    vals = {omega_var(1): 3.0, omega_var(2): 0.5, lambda_var(1, 2): 2.0}
    assert f.evaluate(vals) == pytest.approx(3.0 * 4.0 - 1.0)


def _poly_entries(rng, d):
    out = []
    for _ in range(d * d):
        terms = {}
        for _ in range(rng.integers(1, 3)):
            v = VARS[rng.integers(0, len(VARS))]
            terms[((v, int(rng.integers(1, 3))),)] = int(rng.integers(-3, 4))
        out.append(MvPoly(terms))
    return [out[i * d : (i + 1) * d] for i in range(d)]


def test_determinant_matches_numeric():
    import numpy as np

    rng = np.random.default_rng(0)
    point = {v: float(rng.uniform(0.5, 1.5)) for v in VARS}
    for d in (1, 2, 3, 4, 5):
        rows = _poly_entries(rng, d)
        det = determinant(rows)
        num = np.array([[e.evaluate(point) for e in row] for row in rows])
        assert det.evaluate(point) == pytest.approx(
            np.linalg.det(num), rel=1e-9, abs=1e-9
        )


def test_determinant_structure():
    assert determinant([[W1, L12], [L12, W2]]) == W1 * W2 - L12 * L12
    # Repeated rows: exactly zero, also through the Bareiss branch.
    row = [W1, L12, W2, L23]
    rows = [row, [L12, W2, W1, L23], row, [W2, W1, L23, L12]]
    assert determinant(rows).is_zero()
    with pytest.raises(ValueError):
        determinant([[W1, L12]])
    with pytest.raises(ValueError):
        PolyMatrix.from_rows([[W1], [W1, W2]])
