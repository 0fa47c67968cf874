"""Exponent arithmetic, ordering and scale registration"""
from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from app.core.exponent import (
    Exponent,
    Ordering,
    exp_compare,
    exp_div_monomial,
    exp_mul,
    exp_pow,
    exp_scale_mul,
    exponent_from_json,
    exponent_to_json,
    is_integer,
)
from app.core.scales import RationalScale, ScaleContext, SymbolicScale, rational_context
from app.config import settings_override
from app.errors import (
    ContextMismatch,
    InvalidScale,
    NotRepresentable,
    RefinementExhausted,
    UndecidableMembership,
)
from app.experiments.instances import independent_context

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@given(a=fractions, b=fractions)
def test_rational_order_matches_fractions(a, b):
    expected = Ordering.LT if a < b else Ordering.GT if a > b else Ordering.EQ
    assert exp_compare(Exponent.rational(a), Exponent.rational(b)) is expected


@given(a=fractions, b=fractions)
def test_rational_arithmetic(a, b):
    x, y = Exponent.rational(a), Exponent.rational(b)
    assert (x + y) == a + b
    assert (x - y) == a - b
    assert exp_mul(x, y) == a * b


def test_rational_hashes_like_fraction():
    assert hash(Exponent.rational(Fraction(3, 4))) == hash(Fraction(3, 4))
    assert {Exponent.rational(2): "two"}[Exponent.rational(Fraction(4, 2))] == "two"


def test_rational_scales_fold_into_coefficients():
    ctx = rational_context(2, Fraction(3, 5))
    e = Exponent.monomial(ctx, 2, 1)
    assert e.is_rational
    assert e == Fraction(12, 5)
    assert exp_scale_mul(Exponent.rational(3, ctx), (1, 0)) == 6


def test_symbolic_monomials_compare_through_intervals(symbolic_context):
    alpha = Exponent.monomial(symbolic_context, 1)
    beta = Exponent.monomial(symbolic_context, 0, 1)
    assert alpha > 1
    assert alpha < Fraction(3, 2)
    assert alpha < beta
    assert exp_mul(alpha, alpha) > beta
    assert (alpha - alpha).is_zero


def test_equal_canonical_forms_compare_equal_without_refinement(symbolic_context):
    a = Exponent.make({(1, 0, 0): 2, (0, 0, 0): 1}, symbolic_context)
    b = Exponent.monomial(symbolic_context, 1) * 2 + 1
    assert exp_compare(a, b) is Ordering.EQ
    assert a == b and hash(a) == hash(b)


def test_refinement_separates_close_values(symbolic_context):
    # 1.41 < alpha < 1.42 leaves alpha vs 1.4142 open until sqrt(2) is evaluated
    alpha = Exponent.monomial(symbolic_context, 1)
    assert alpha > Fraction(14142, 10000)
    assert alpha < Fraction(14143, 10000)


def test_dependent_values_exhaust_refinement(symbolic_context):
    alpha_squared = exp_pow(Exponent.monomial(symbolic_context, 1), 2)
    with settings_override(refinement_cap=3), pytest.raises(RefinementExhausted):
        exp_compare(alpha_squared, Exponent.rational(2))


def test_unrefinable_scale_stops_at_registered_interval():
    ctx = ScaleContext(alpha=SymbolicScale("alpha", Fraction(3, 2), Fraction(2)), independent=True)
    alpha = Exponent.monomial(ctx, 1)
    assert alpha > 1
    with pytest.raises(RefinementExhausted):
        exp_compare(alpha, Exponent.rational(Fraction(7, 4)))


def test_shift_squared_is_not_representable(symbolic_context):
    s = Exponent.monomial(symbolic_context, 0, 0, 1)
    with pytest.raises(NotRepresentable):
        exp_mul(s, s)
    with pytest.raises(NotRepresentable):
        exp_pow(s, 2)


def test_division_by_a_base_power(symbolic_context):
    alpha = Exponent.monomial(symbolic_context, 1)
    e = Exponent.make({(2, 0, 0): 3, (0, 0, 0): 1}, symbolic_context)
    quotient = exp_div_monomial(e, alpha)
    assert quotient == Exponent.make({(1, 0, 0): 3, (-1, 0, 0): 1}, symbolic_context)


def test_integrality():
    assert is_integer(Exponent.rational(4))
    assert not is_integer(Exponent.rational(Fraction(1, 2)))
    assert not is_integer(Exponent.monomial(independent_context(), 1))
    dependent = ScaleContext(alpha=SymbolicScale("alpha", Fraction(141, 100), Fraction(142, 100), expression="sqrt(2)"))
    with pytest.raises(UndecidableMembership):
        is_integer(Exponent.monomial(dependent, 1))


def test_contexts_must_agree(symbolic_context):
    other = independent_context(alpha=("1.40", "1.43"))
    with pytest.raises(ContextMismatch):
        Exponent.monomial(symbolic_context, 1) + Exponent.monomial(other, 1)


def test_json_form(symbolic_context):
    assert exponent_to_json(Exponent.rational(Fraction(-3, 7))) == "-3/7"
    e = Exponent.make({(1, 1, 0): Fraction(1, 2)}, symbolic_context)
    payload = exponent_to_json(e)
    assert payload == {"terms": [{"m": 1, "n": 1, "s": 0, "c": "1/2"}]}
    assert exponent_from_json(payload, symbolic_context) == e


@pytest.mark.parametrize("p, q", [(1, 1), (0, 3), (-2, 3), (4, 2)])
def test_invalid_rational_scales(p, q):
    with pytest.raises(InvalidScale):
        RationalScale(p, q)


def test_invalid_symbolic_scales():
    with pytest.raises(InvalidScale):
        SymbolicScale("alpha", Fraction(1, 2), Fraction(3, 2))
    with pytest.raises(InvalidScale):
        SymbolicScale("alpha", Fraction(2), Fraction(3), excluded=(Fraction(5, 2),))
    with pytest.raises(InvalidScale):
        SymbolicScale("alpha", Fraction(3), Fraction(2))
