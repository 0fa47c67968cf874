"""Truncated Hahn series: canonical form, products, substitution, projections"""
from fractions import Fraction

import pytest
from hypothesis import given

from app.core.exponent import Exponent, exp_add
from app.errors import NonPositiveExponentScale, PreconditionViolation, UndecidableMembership, ZeroSeries
from app.experiments.instances import geometric_series
from app.series.hahn import (
    TruncatedHahnSeries,
    coefficient,
    expand_rational,
    in_rational_coset,
    project_coset,
    series_add,
    series_from_json,
    series_from_terms,
    series_mul,
    series_shift,
    series_to_json,
    series_truncate,
    substitute,
    valuation,
)
from app.core.scales import ScaleContext, SymbolicScale
from tests.strategies import laurent_series, positive_scales, rational_series, small_fractions


def exponents(F):
    return [e.rational_value for e, _ in F.terms]


def test_terms_merge_and_zeros_drop():
    F = series_from_terms([(1, 1), (1, -1), (2, 3), (Fraction(1, 2), 5)])
    assert F.terms == ((Exponent.rational(Fraction(1, 2)), Fraction(5)), (Exponent.rational(2), Fraction(3)))
    assert F.is_exact


def test_terms_at_or_above_cutoff_are_dropped():
    F = series_from_terms([(0, 1), (3, 2), (5, 1)], cutoff=3)
    assert exponents(F) == [0]
    assert F.cutoff == 3
    with pytest.raises(PreconditionViolation):
        coefficient(F, 3)
    assert coefficient(F, 2) == 0


def test_exact_zero_and_known_empty_differ():
    exact = TruncatedHahnSeries()
    empty = TruncatedHahnSeries.zero(5)
    assert exact.is_exact_zero and not exact.is_known_empty
    assert empty.is_known_empty and not empty.is_exact_zero
    with pytest.raises(ZeroSeries):
        valuation(empty)


def test_product_cutoff_uses_the_other_valuation():
    F = geometric_series(10)
    G = TruncatedHahnSeries.monomial(2)
    product = series_mul(F, G)
    assert product.cutoff == 12
    assert exponents(product) == list(range(2, 12))

    H = series_from_terms([(1, 1)], cutoff=5)
    assert series_mul(F, H).cutoff == 5


def test_known_empty_factor_keeps_a_cutoff():
    product = series_mul(TruncatedHahnSeries.zero(5), TruncatedHahnSeries.monomial(2))
    assert product.is_known_empty
    assert product.cutoff == 7
    assert series_mul(TruncatedHahnSeries(), geometric_series(10)).is_exact_zero


def test_sum_takes_the_smaller_cutoff():
    F = series_add(geometric_series(10), geometric_series(4, shift=Fraction(1, 2)))
    assert F.cutoff == 4
    assert exponents(F) == [0, Fraction(1, 2), 1, Fraction(3, 2), 2, Fraction(5, 2), 3, Fraction(7, 2)]


def test_substitute_scales_exponents_and_cutoff():
    F = geometric_series(8)
    G = substitute(F, Fraction(3, 2))
    assert G.cutoff == 12
    assert exponents(G)[:3] == [0, Fraction(3, 2), 3]
    with pytest.raises(NonPositiveExponentScale):
        substitute(F, 0)
    with pytest.raises(NonPositiveExponentScale):
        substitute(F, -1)


def test_substitute_by_a_symbolic_exponent(symbolic_context):
    alpha = Exponent.monomial(symbolic_context, 1)
    G = substitute(TruncatedHahnSeries.polynomial([1, 1, 1], cutoff=3), alpha)
    assert [e for e, _ in G.terms] == [Exponent.rational(0), alpha, alpha * 2]
    assert G.cutoff == alpha * 3


def test_shift_and_truncate():
    F = series_shift(geometric_series(4), Fraction(-1, 2))
    assert exponents(F) == [Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2), Fraction(5, 2)]
    T = series_truncate(F, 1)
    assert exponents(T) == [Fraction(-1, 2), Fraction(1, 2)]
    assert series_truncate(F, 100).cutoff == F.cutoff


def test_expand_rational():
    U = TruncatedHahnSeries.polynomial([1, 1])
    V = TruncatedHahnSeries.polynomial([1, 0, 0, -1])
    F = expand_rational(U, V, 10)
    assert exponents(F) == [0, 1, 3, 4, 6, 7, 9]
    with pytest.raises(PreconditionViolation):
        expand_rational(U, TruncatedHahnSeries.polynomial([0, 1]), 10)


def test_project_coset_splits_fractional_classes():
    F = series_add(geometric_series(6), geometric_series(6, shift=Fraction(1, 3)))
    lattice = project_coset(F, 0)
    shifted = project_coset(F, Fraction(1, 3))
    assert exponents(lattice) == [0, 1, 2, 3, 4, 5]
    assert all(e.denominator == 3 for e in exponents(shifted))
    assert series_add(lattice, shifted) == F


def test_symbolic_coset_membership(symbolic_context):
    assert not in_rational_coset(Exponent.monomial(symbolic_context, 1))
    dependent = ScaleContext(alpha=SymbolicScale("alpha", Fraction(3, 2), Fraction(2)))
    with pytest.raises(UndecidableMembership):
        in_rational_coset(Exponent.monomial(dependent, 1))


def test_json_form():
    F = series_from_terms([(Fraction(1, 2), Fraction(-3, 4)), (2, 1)], cutoff=5)
    payload = series_to_json(F)
    assert payload == {"terms": [["1/2", "-3/4"], ["2", "1"]], "cutoff": "5"}
    assert series_from_json(payload) == F
    assert series_to_json(TruncatedHahnSeries())["cutoff"] == "inf"


@given(F=rational_series(), G=rational_series())
def test_exact_product_commutes(F, G):
    assert series_mul(F, G) == series_mul(G, F)


@given(F=rational_series(), G=rational_series(), H=rational_series(max_terms=4))
def test_exact_product_distributes(F, G, H):
    assert series_mul(series_add(F, G), H) == series_add(series_mul(F, H), series_mul(G, H))


@given(F=rational_series(cutoff=10), G=rational_series(cutoff=7))
def test_product_is_exact_below_its_cutoff(F, G):
    """Terms below the reported cutoff do not depend on what lies above the inputs' cutoffs"""
    product = series_mul(F, G)
    padded_F = series_from_terms(list(F.terms) + [(10, 1)], cutoff=11)
    padded_G = series_from_terms(list(G.terms) + [(7, 1)], cutoff=8)
    padded = series_truncate(series_mul(padded_F, padded_G), product.cutoff)
    assert padded.terms == product.terms


@given(F=rational_series(cutoff=10), G=rational_series(cutoff=7), r=positive_scales)
def test_substitution_respects_products(F, G, r):
    assert substitute(series_mul(F, G), r) == series_mul(substitute(F, r), substitute(G, r))


@given(F=rational_series(cutoff=10), r=positive_scales, t=positive_scales)
def test_substitutions_compose(F, r, t):
    assert substitute(F, r * t) == substitute(substitute(F, r), t)


@given(T=rational_series(), F=laurent_series(), gamma=small_fractions)
def test_coset_projection_commutes_with_laurent_factors(T, F, gamma):
    assert project_coset(series_mul(T, F), gamma) == series_mul(project_coset(T, gamma), F)


@given(F=rational_series(), G=laurent_series())
def test_valuation_of_a_product(F, G):
    if not F.terms or not G.terms:
        return
    assert valuation(series_mul(F, G)) == exp_add(valuation(F), valuation(G))
