"""Equation checking and the standard-form transforms"""
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from app.core.exponent import Exponent
from app.errors import AlreadyHomogeneous, BaseAlreadyAboveOne, DegenerateEquation, InvalidScale, PreconditionViolation
from app.experiments.instances import lacunary_series, random_equation, random_poly, two_class_equation
from app.mahler.equation import Inconclusive, MahlerEquation, Refuted, Verified, apply_operator, check_equation
from app.mahler.reductions import (
    admissible_valuations,
    composed_witness,
    homogenize,
    invert_base,
    normalize_leading,
    reduce_to_standard_form,
    shift_equation,
    valuation_candidates,
)
from app.series.fracpoly import FracPoly
from app.series.hahn import TruncatedHahnSeries, series_add, substitute
from tests.helpers import coeff_lists
from tests.strategies import positive_scales


def test_lacunary_series_verifies_up_to_its_cutoff(lacunary, lacunary_equation):
    verdict = check_equation(lacunary, lacunary_equation)
    assert isinstance(verdict, Verified)
    assert verdict.up_to == 2 ** 16


def test_perturbed_series_is_refuted_at_the_first_residual(lacunary, lacunary_equation):
    F = series_add(lacunary, TruncatedHahnSeries.monomial(3))
    verdict = check_equation(F, lacunary_equation)
    assert verdict == Refuted(Exponent.rational(3), Fraction(1))


def test_too_short_prefix_is_inconclusive(lacunary_equation):
    verdict = check_equation(lacunary_series(1), lacunary_equation)
    assert isinstance(verdict, Inconclusive)


def test_exact_solution_verifies_without_bound():
    eq = MahlerEquation.build(2, [[1], [-1]])
    assert check_equation(TruncatedHahnSeries.monomial(0), eq) == Verified(None)


def test_apply_operator_residual(doubling_equation):
    F = TruncatedHahnSeries.polynomial([1, 1, 1, 1], cutoff=4)
    residual = apply_operator(F, doubling_equation)
    assert residual.is_known_empty
    assert residual.cutoff == 4


def test_equation_construction_rules():
    with pytest.raises(DegenerateEquation):
        MahlerEquation.build(2, [[1]])
    with pytest.raises(PreconditionViolation):
        MahlerEquation.build(2, [[1], []])
    with pytest.raises(InvalidScale):
        MahlerEquation.build(1, [[1], [1]])


def test_homogenize_lacunary_equation(lacunary, lacunary_equation):
    step = homogenize(lacunary_equation)
    assert step.witness == 1
    assert coeff_lists(step.equation) == [[0, 1], [-1, -1], [1]]
    assert isinstance(check_equation(lacunary, step.equation), Verified)


def test_homogenize_with_a_higher_power_rhs():
    eq = MahlerEquation.build(2, [[1], [-1]], rhs=[0, 0, 0, 0, 1])
    step = homogenize(eq)
    assert coeff_lists(step.equation) == [[0, 0, 0, 0, 1], [-1, 0, 0, 0, -1], [1]]


def test_homogenize_non_integer_base():
    eq = MahlerEquation.build(Fraction(3, 2), [[1], [-1]], rhs=[0, 1])
    step = homogenize(eq)
    assert step.witness == 2
    assert step.equation.base == Fraction(3, 2)
    assert coeff_lists(step.equation) == [[0, 1], [-1, -1], [1]]


def test_homogenize_rejects_homogeneous(doubling_equation):
    with pytest.raises(AlreadyHomogeneous):
        homogenize(doubling_equation)


def test_homogenize_keeps_the_content():
    step = homogenize(MahlerEquation.build(2, [[2], [-2]], rhs=[0, 2]))
    assert coeff_lists(step.equation) == [[0, 4], [-4, -4], [4]]


def test_normalize_leading():
    eq, i = normalize_leading(MahlerEquation.build(2, [[], [1], [-1]]))
    assert i == 1
    assert coeff_lists(eq) == [[1], [-1]]
    same, j = normalize_leading(MahlerEquation.build(2, [[1], [-1]]))
    assert j == 0 and coeff_lists(same) == [[1], [-1]]
    with pytest.raises(DegenerateEquation):
        normalize_leading(MahlerEquation.build(2, [[], [], [5]]))


def test_invert_base():
    eq = MahlerEquation.build(Fraction(1, 2), [[1], [-1, -1]])
    step = invert_base(eq)
    assert step.equation.base == 2
    assert step.witness == 1
    assert coeff_lists(step.equation) == [[-1, 0, -1], [1]]
    with pytest.raises(BaseAlreadyAboveOne):
        invert_base(step.equation)


def test_invert_base_witness_uses_the_numerator():
    eq = MahlerEquation.build(Fraction(2, 3), [[1], [-1]])
    step = invert_base(eq)
    assert step.equation.base == Fraction(3, 2)
    assert step.witness == 2


def test_shift_equation(doubling_equation, geometric):
    shifted = shift_equation(doubling_equation, 3)
    assert coeff_lists(shifted) == [[1], [-1, 0, 0, -1]]
    assert isinstance(check_equation(substitute(geometric, 3), shifted), Verified)


def test_reduce_to_standard_form():
    eq = MahlerEquation.build(Fraction(1, 2), [[1], [-1]], rhs=[0, 1])
    steps = reduce_to_standard_form(eq)
    assert [s.description.split(":")[0] for s in steps] == ["homogenize", "invert_base"]
    final = steps[-1].equation
    assert final.base == 2 and final.is_homogeneous
    assert composed_witness(steps) == 2
    assert coeff_lists(final) == [[0, 0, 0, 0, 1], [-1, 0, 0, 0, -1], [1]]


def test_admissible_valuations_of_two_class_equation():
    eq = two_class_equation(3)
    assert admissible_valuations(eq) == [0, Fraction(1, 9), Fraction(1, 3)]
    pairs = {(i, j): v for i, j, v in valuation_candidates(eq)}
    assert pairs[(0, 2)] == Fraction(1, 9)


def test_symbolic_valuation_candidates(symbolic_context):
    alpha = Exponent.monomial(symbolic_context, 1)
    eq = MahlerEquation.symbolic(symbolic_context, (1, 0), [FracPoly.from_terms([(alpha - 1, 1)]), [1]])
    assert admissible_valuations(eq) == [1]
    no_laurent = MahlerEquation.symbolic(symbolic_context, (1, 0), [[0, 1], [1]])
    assert admissible_valuations(no_laurent) == []


def _grid(bound=4, max_denominator=36):
    return sorted({Fraction(k, d) for d in range(1, max_denominator + 1) for k in range(-bound * d, bound * d + 1)})


VALUATION_GRID = _grid()


def _minimum_is_attained_twice(valuations, base, v):
    values = [c + base ** i * v for i, c in valuations.items()]
    return values.count(min(values)) >= 2


@settings(max_examples=40, deadline=None)
@given(
    base=st.sampled_from([Fraction(2), Fraction(3), Fraction(3, 2), Fraction(1, 2)]),
    shifts=st.lists(st.one_of(st.none(), st.integers(0, 3)), min_size=2, max_size=3),
)
def test_admissible_valuations_cover_every_balanced_valuation(base, shifts):
    assume(shifts[-1] is not None and sum(c is not None for c in shifts) >= 2)
    eq = MahlerEquation.build(base, [[0] * c + [1] if c is not None else [] for c in shifts])
    admissible = set(admissible_valuations(eq))
    valuations = {i: c for i, c in enumerate(shifts) if c is not None}
    for v in VALUATION_GRID:
        if _minimum_is_attained_twice(valuations, base, v):
            assert Exponent.rational(v) in admissible


def _homogeneous_with_solution(seed, base):
    """A homogenized random equation and the exact polynomial solution it carries"""
    rng = random.Random(seed)
    H = random_poly(rng, 4)
    shape = random_equation(rng, base, 1, 2)
    rhs = FracPoly.of(apply_operator(H, shape))
    assume(not rhs.is_zero)
    step = homogenize(MahlerEquation(shape.base, shape.coeffs, rhs))
    return step.equation, substitute(H, step.witness)


seeds = st.integers(0, 10 ** 6)
bases = st.sampled_from([Fraction(2), Fraction(3, 2), Fraction(1, 2), Fraction(2, 3)])


@settings(max_examples=30, deadline=None)
@given(seed=seeds, base=bases, r=positive_scales)
def test_shift_preserves_solutions(seed, base, r):
    eq, G = _homogeneous_with_solution(seed, base)
    assert isinstance(check_equation(G, eq), Verified)
    assert isinstance(check_equation(substitute(G, r), shift_equation(eq, r)), Verified)


@settings(max_examples=30, deadline=None)
@given(seed=seeds, base=st.sampled_from([Fraction(1, 2), Fraction(2, 3), Fraction(3, 5)]))
def test_invert_base_preserves_solutions(seed, base):
    eq, G = _homogeneous_with_solution(seed, base)
    step = invert_base(eq)
    assert step.equation.base > 1
    assert isinstance(check_equation(substitute(G, step.witness), step.equation), Verified)


@settings(max_examples=30, deadline=None)
@given(seed=seeds, base=bases, padding=st.integers(1, 2))
def test_normalize_leading_preserves_solutions(seed, base, padding):
    eq, G = _homogeneous_with_solution(seed, base)
    padded = MahlerEquation(eq.base, (FracPoly(),) * padding + eq.coeffs, FracPoly())
    F = substitute(G, base ** -padding)
    assert isinstance(check_equation(F, padded), Verified)
    normalized, dropped = normalize_leading(padded)
    assert dropped == padding
    assert normalized == eq
    assert isinstance(check_equation(substitute(F, base ** padding), normalized), Verified)
