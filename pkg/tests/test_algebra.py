from itertools import product

import pytest
import sympy
from hypothesis import given, strategies as st

from gepkit import Exponential, ExpPoly, GenPoly, Scalar, MultiExpPoly
from gepkit.algebra import (
    MalformedExponential,
    canonicalize,
    degree,
    evaluate,
    generic_combination,
    linear_combination,
    spectrum,
    translate,
)
from strategies import E, exponentials, exppolys, nonzero_scalars, points

X = GenPoly.variable(1, 0)
ONE_1 = GenPoly.constant(1, 1)


def m(*lam):
    return Exponential.of(*lam)


# -- canonicalize ------------------------------------------------------------


def test_canonicalize_merges_coefficients():
    f = canonicalize([(m(2), GenPoly.constant(1, 3)), (m(2), GenPoly.constant(1, -1))])
    assert f == ExpPoly.exponential(m(2), GenPoly.constant(1, 2))


def test_canonicalize_drops_zero_polynomials():
    assert canonicalize([(m(1), GenPoly.zero(1))]).is_zero()


def test_canonicalize_cancellation_matches_pointwise():
    raw = [(m(2), X), (m(3), ONE_1), (m(2), -X)]
    f = canonicalize(raw)
    assert f == ExpPoly.exponential(m(3))
    for x in range(-3, 4):
        direct = sum((e.evaluate((x,)) * p.evaluate((x,)) for e, p in raw), Scalar(0))
        assert f.evaluate((x,)) == direct


def test_zero_lambda_rejected():
    with pytest.raises(MalformedExponential):
        m(0)


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        canonicalize([(m(2, 3), ONE_1)])


# -- degree ------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, deg",
    [("0", -1), ("t1", 1), ("t1^2*exp(2) + t1", 4), ("t1^2 + t2^2", 2), ("exp(2)", 1), ("1", 0), ("t1*exp(2)+t1", 3)],
)
def test_degree(text, deg):
    assert degree(E(text)) == deg


# -- evaluate / translate / spectrum -------------------------------------------


def test_evaluate_examples():
    assert evaluate(E("exp(2)"), 3) == 8
    assert evaluate(E("t1*exp(2)"), -2) == Scalar("-1/2")
    assert evaluate(E("t1^2 + t2^2"), (1, 2)) == 5


def test_translate_examples():
    assert translate(E("t1^2"), 1) == E("t1^2 + 2*t1 + 1")
    assert translate(E("exp(2)"), 2) == E("4*exp(2)")
    f = E("t1*exp(2)")
    g = translate(f, 1)
    assert g == E("2*t1*exp(2) + 2*exp(2)")
    for x in range(6):
        assert g.evaluate(x) == f.evaluate(x + 1)


def test_spectrum_examples():
    assert spectrum(ExpPoly.zero(1)) == frozenset()
    assert spectrum(E("t1 + exp(2)")) == {m(1), m(2)}
    assert spectrum(E("3*exp(2) - exp(2)")) == {m(2)}


# -- generic combination --------------------------------------------------------


def test_generic_combination_disjoint_spectra():
    coeffs, f0 = generic_combination([E("exp(2)"), E("exp(3)")])
    assert f0.spectrum() == {m(2), m(3)}
    assert f0 == linear_combination(coeffs, [E("exp(2)"), E("exp(3)")])


def test_generic_combination_singleton():
    f = E("t1*exp(3)")
    assert generic_combination([f]) == ([Scalar(1)], f)


def _good_coefficients_by_sympy():
    x = sympy.Symbol("x")
    good = set()
    for c1, c2 in product(range(-2, 3), repeat=2):
        if sympy.Poly(c1 * x + c2 * (-x + x**2), x).degree() == 2:
            good.add((c1, c2))
    return good


@pytest.mark.parametrize("seed", range(10))
def test_generic_combination_keeps_top_degree(seed):
    fs = [E("t1"), E("-t1 + t1^2")]
    coeffs, f0 = generic_combination(fs, rng_seed=seed)
    good = _good_coefficients_by_sympy()
    assert good == {(c1, c2) for c1, c2 in product(range(-2, 3), repeat=2) if c2}
    c = tuple(int(v.re) for v in coeffs)
    assert c in good and 0 not in c
    assert f0.degree() == 2 and f0.component(m(1)).degree() == 2


def test_generic_combination_seed_reproducible():
    fs = [E("t1*exp(2) + exp(3)"), E("-t1*exp(2) + t1^2")]
    assert generic_combination(fs, 7) == generic_combination(fs, 7)


def test_generic_combination_rejects_all_zero():
    with pytest.raises(ValueError):
        generic_combination([ExpPoly.zero(1)])


@given(st.lists(exppolys(d=1, max_terms=2), min_size=1, max_size=3), st.integers(0, 100))
def test_generic_combination_spectrum_is_union(fs, seed):
    if all(f.is_zero() for f in fs):
        return
    _, f0 = generic_combination(fs, seed)
    union = frozenset().union(*(f.spectrum() for f in fs))
    assert f0.spectrum() == union
    for mm in union:
        assert f0.component(mm).degree() == max(f.component(mm).degree() for f in fs)


# -- properties ------------------------------------------------------------------


@given(exponentials(d=2), points(2), points(2))
def test_exponential_is_multiplicative(e, x, y):
    xy = tuple(a + b for a, b in zip(x, y))
    assert e.evaluate(xy) == e.evaluate(x) * e.evaluate(y)


@given(exppolys(), st.data())
def test_translate_is_an_action(f, data):
    h = data.draw(points(f.d))
    g = data.draw(points(f.d))
    hg = tuple(a + b for a, b in zip(h, g))
    assert translate(translate(f, h), g) == translate(f, hg)


@given(exppolys(), st.data())
def test_degree_and_spectrum_translation_invariant(f, data):
    h = data.draw(points(f.d))
    g = translate(f, h)
    assert g.degree() == f.degree() and g.spectrum() == f.spectrum()


@given(exppolys(), nonzero_scalars)
def test_degree_invariant_under_scaling(f, c):
    assert f.scale(c).degree() == f.degree()


@given(exppolys(), st.data())
def test_canonicalize_idempotent_and_preserves_values(f, data):
    # split each term into two pieces and add a cancelling pair
    raw = []
    for e, p in f.terms:
        half = p.scale(Scalar(1, 1) / 2)
        raw += [(e, half), (e, p - half)]
    extra = data.draw(exponentials(d=f.d))
    raw += [(extra, GenPoly.constant(f.d, 1)), (extra, GenPoly.constant(f.d, -1))]
    g = canonicalize(raw, d=f.d)
    assert g == f
    assert canonicalize(list(g.terms), d=f.d) == g
    x = data.draw(points(f.d))
    assert g.evaluate(x) == f.evaluate(x)


@given(exppolys(d=1), exppolys(d=1), points(1))
def test_product_evaluates_pointwise(f, g, x):
    assert (f * g).evaluate(x) == f.evaluate(x) * g.evaluate(x)


# -- multi-block functions -------------------------------------------------------


def test_of_sum_evaluates_the_sum():
    f = E("t1^2*exp(2) + t1")
    F = MultiExpPoly.of_sum(f, 3)
    for xs in product(range(-1, 2), repeat=3):
        assert F.evaluate([(v,) for v in xs]) == f.evaluate(sum(xs))


def test_support_and_restrict():
    f = E("t1*exp(3)")
    F = MultiExpPoly.of_sum(f, 3)
    assert F.support() == {1, 2, 3}
    G = F.restrict({2: (1,)})
    assert G.n == 2
    for a, b in product(range(-2, 3), repeat=2):
        assert G.evaluate([(a,), (b,)]) == f.evaluate(a + 1 + b)


def test_embed_depends_on_one_block():
    G = MultiExpPoly.embed(E("t1*t2", d=2), 2, 3)
    assert G.support() == {2}
