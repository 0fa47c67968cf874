"""Rational certificates, p-adic witnesses, lattice filtering and valuation obstructions"""
import random
from fractions import Fraction

import pytest

from app.core.exponent import Exponent
from app.errors import PreconditionViolation, SupportNotDivisible, SymbolicBaseUnsupported, SymbolicOnly, WindowTooSmall
from app.experiments.instances import geometric_series, lacunary_series, planted_rational
from app.mahler.equation import MahlerEquation, NotFound
from app.mahler.solver import Obstruction
from app.rationality.certify import RationalCertificate, certify_rational, extract_inner_series
from app.rationality.lattice import (
    lattice_intersection_filter,
    padic_witness,
    rational_pipeline,
    witness_pairs_for_support,
)
from app.rationality.obstruction import Infeasible, joint_valuation_consistency, minimal_exponent_obstruction
from app.series.fracpoly import FracPoly
from app.series.hahn import TruncatedHahnSeries, expand_rational, series_from_terms, series_shift, substitute, support


def test_certify_geometric(geometric):
    certificate = certify_rational(geometric, 1)
    assert isinstance(certificate, RationalCertificate)
    assert certificate.U.terms == TruncatedHahnSeries.polynomial([1]).terms
    assert certificate.V.terms == FracPoly.from_coeffs([1, -1]).terms
    assert certificate.theta == 64


def test_certify_finds_the_least_denominator():
    F = expand_rational(TruncatedHahnSeries.polynomial([1, 1]), TruncatedHahnSeries.polynomial([1, 0, 0, -1]), 64)
    certificate = certify_rational(F, 3)
    assert certificate.V.terms == FracPoly.from_coeffs([1, 0, 0, -1]).terms
    assert certificate.U.terms == TruncatedHahnSeries.polynomial([1, 1]).terms


@pytest.mark.parametrize("seed", range(5))
def test_certify_planted_rationals(seed):
    U, V, F = planted_rational(random.Random(seed), 2, 64)
    certificate = certify_rational(F, 2)
    assert isinstance(certificate, RationalCertificate)
    assert expand_rational(certificate.U, certificate.V, 64).terms == F.terms


def test_lacunary_series_is_not_rational():
    assert isinstance(certify_rational(lacunary_series(4096), 20), NotFound)


def test_certify_edge_cases():
    exact = TruncatedHahnSeries.polynomial([1, 2, 3])
    certificate = certify_rational(exact, 2)
    assert certificate.U == exact and certificate.theta is None
    empty = certify_rational(TruncatedHahnSeries.zero(40), 2)
    assert empty.U.is_exact_zero
    with pytest.raises(WindowTooSmall):
        certify_rational(geometric_series(10), 2)
    with pytest.raises(PreconditionViolation):
        certify_rational(geometric_series(64, shift=Fraction(1, 2)), 1)


def test_exact_polynomial_respects_the_degree_bound():
    P = TruncatedHahnSeries.polynomial([1] * 30)
    result = certify_rational(P, 2)
    assert isinstance(result, NotFound)
    assert "degree 29" in result.reason
    shifted = series_shift(TruncatedHahnSeries.polynomial([1, 0, 2]), 5)
    certificate = certify_rational(shifted, 2)
    assert certificate.U == shifted
    assert certificate.V.terms == FracPoly.constant(1).terms
    assert isinstance(certify_rational(shifted, 1), NotFound)


def test_extract_inner_series(geometric):
    inner = extract_inner_series(substitute(geometric, 4), 2, 2)
    assert inner.terms == geometric.terms
    assert inner.cutoff == 64
    with pytest.raises(SupportNotDivisible) as info:
        extract_inner_series(TruncatedHahnSeries.polynomial([0, 1, 0, 0, 1]), 2, 2)
    assert info.value.witness == 1
    with pytest.raises(PreconditionViolation):
        extract_inner_series(geometric, 1, 2)


@pytest.mark.parametrize(
    "alpha, beta, p, bound, expected",
    [
        (Fraction(2, 3), Fraction(5, 3), 3, 2, (1, -1)),
        (2, 3, 5, 1, (0, 1)),
        (2, 4, 2, 2, (2, -1)),
        (2, 3, 2, 1, (0, 1)),
    ],
)
def test_padic_witness(alpha, beta, p, bound, expected):
    assert padic_witness(alpha, beta, p, bound) == expected


def test_padic_witness_outside_the_bound():
    assert isinstance(padic_witness(2, 4, 2, 1), NotFound)
    with pytest.raises(PreconditionViolation):
        padic_witness(0, 3, 2, 1)


def test_witness_pairs_for_support():
    S = [Exponent.rational(Fraction(1, 2)), Exponent.rational(1), Exponent.rational(3)]
    pairs = witness_pairs_for_support(S, Fraction(2, 3), Fraction(5, 3), 2)
    assert pairs == {2: (0, 1), 3: (1, -1), 5: (1, 0)}


def test_lattice_intersection_filter():
    S = [Exponent.rational(Fraction(1, 2)), Exponent.rational(1), Exponent.rational(3)]
    kept = lattice_intersection_filter(S, [(1, 0), (0, 1)], Fraction(2, 3), Fraction(5, 3))
    assert kept == (1, 3)
    assert lattice_intersection_filter(S, [(1, 0)], Fraction(2, 3), Fraction(5, 3)) == tuple(S)


def test_rational_pipeline_certifies_a_common_solution(geometric, doubling_equation, tripling_equation):
    report = rational_pipeline(geometric, doubling_equation, tripling_equation, bound=2, deg_max=2)
    assert report.failure is None
    assert report.classes == 1 and report.rescale == 1
    assert report.pairs == {2: (0, 1), 3: (1, 0)}
    assert [entry[3] for entry in report.combined] == ["Verified", "Verified"]
    assert isinstance(report.certificate, RationalCertificate)
    assert report.certificate.V.terms == FracPoly.from_coeffs([1, -1]).terms


def test_rational_pipeline_reports_a_non_integral_support(doubling_equation, tripling_equation):
    F = geometric_series(64, shift=Fraction(1, 2))
    report = rational_pipeline(F, doubling_equation, tripling_equation, bound=2, deg_max=2)
    assert report.failure == "support is not integral"
    assert report.removed == support(F)
    assert report.certificate is None


# valuation obstructions

def test_joint_valuations_share_zero(symbolic_context):
    eq_a = MahlerEquation.symbolic(symbolic_context, (1, 0), [[1], [-1]])
    eq_b = MahlerEquation.symbolic(symbolic_context, (0, 1), [[1], [-1]])
    assert joint_valuation_consistency(eq_a, eq_b) == [0]


def test_joint_valuations_infeasible(symbolic_context):
    eq_a = MahlerEquation.symbolic(symbolic_context, (1, 0), [[0, 1], [1]])
    eq_b = MahlerEquation.symbolic(symbolic_context, (0, 1), [[0, 1], [1]])
    result = joint_valuation_consistency(eq_a, eq_b)
    assert isinstance(result, Infeasible)
    assert result.obstruction.pairs_a == ((0, 1),)
    assert result.obstruction.constraints == ("(1 - alpha)*v in Z", "(1 - beta)*v in Z")


def test_joint_valuations_preconditions(doubling_equation, symbolic_context):
    symbolic = MahlerEquation.symbolic(symbolic_context, (1, 0), [[1], [-1]])
    with pytest.raises(PreconditionViolation):
        joint_valuation_consistency(symbolic, None)
    with pytest.raises(SymbolicOnly):
        joint_valuation_consistency(doubling_equation, symbolic)


def test_minimal_exponent_obstruction():
    assert minimal_exponent_obstruction(MahlerEquation.build(Fraction(3, 2), [[1], [-1]])) == [0]
    result = minimal_exponent_obstruction(MahlerEquation.build(Fraction(5, 2), [[0, 1], [1]]))
    assert isinstance(result, Obstruction)
    assert result.exponent == Fraction(2, 3)
    with pytest.raises(PreconditionViolation):
        minimal_exponent_obstruction(MahlerEquation.build(2, [[1], [-1]]))


def test_minimal_exponent_obstruction_needs_a_rational_base(symbolic_context):
    with pytest.raises(SymbolicBaseUnsupported):
        minimal_exponent_obstruction(MahlerEquation.symbolic(symbolic_context, (1, 0), [[1], [-1]]))
