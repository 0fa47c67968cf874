"""
Equation transforms: homogenization, leading-term normalization, base
inversion, exponent shifts, and the candidate valuations of solutions
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from app.core.exponent import Exponent, exp_min, exp_mul, exp_neg
from app.core.symbolic import from_sympy, laurent_quotient, to_sympy
from app.errors import (
    AlreadyHomogeneous,
    BaseAlreadyAboveOne,
    DegenerateEquation,
    PreconditionViolation,
    SymbolicBaseUnsupported,
)
from app.mahler.equation import MahlerEquation
from app.series.fracpoly import FracPoly
from app.series.hahn import TruncatedHahnSeries, series_mul, series_shift, series_sub, substitute

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Reduction:
    """
    Output of an equation transform

    If F solves the input equation, G(x) = F(x^witness) solves `equation`.
    """

    equation: MahlerEquation
    witness: Exponent
    description: str


def _substitute_poly(P: FracPoly, r) -> FracPoly:
    return FracPoly.of(substitute(P, r))


def _strip_common_monomial(polys: List[TruncatedHahnSeries]) -> List[FracPoly]:
    nonzero = [P for P in polys if P.terms]
    v = exp_min(P.terms[0][0] for P in nonzero)
    return [FracPoly.of(series_shift(P, exp_neg(v))) if P.terms else FracPoly() for P in polys]


def homogenize(eq: MahlerEquation) -> Reduction:
    """
    Homogeneous equation of degree d+1 for G(x) = F(x^q)

    After x -> x^q the equation has coefficients P_i(x^q) and right-hand
    side A(x^q). It is multiplied by A(x^p), its image under x -> x^alpha
    is multiplied by A(x^q), and the two are subtracted.
    """
    if eq.is_homogeneous:
        raise AlreadyHomogeneous("right-hand side is already zero")
    if not eq.is_rational_base:
        raise SymbolicBaseUnsupported("homogenize needs a rational base", base=str(eq.base))
    alpha = eq.rational_base
    p, q = alpha.numerator, alpha.denominator
    A_p = _substitute_poly(eq.rhs, p)
    A_q = _substitute_poly(eq.rhs, q)
    d = eq.degree
    coeffs = []
    for j in range(d + 2):
        current = series_mul(A_p, _substitute_poly(eq.coeffs[j], q)) if j <= d else FracPoly()
        previous = series_mul(A_q, _substitute_poly(eq.coeffs[j - 1], p)) if j >= 1 else FracPoly()
        coeffs.append(series_sub(current, previous))
    homogeneous = MahlerEquation(eq.base, tuple(_strip_common_monomial(coeffs)), FracPoly())
    logger.info(f"Homogenized degree {d} equation to degree {d + 1}, witness x -> x^{q}")
    return Reduction(homogeneous, Exponent.rational(q), f"homogenize: G(x) = F(x^{q})")


def normalize_leading(eq: MahlerEquation) -> Tuple[MahlerEquation, int]:
    """
    Drop leading zero coefficients

    Returns:
        (equation for G(x) = F(x^(base^i)), i)
    """
    if not eq.is_homogeneous:
        raise PreconditionViolation("normalize_leading needs a homogeneous equation")
    i = eq.nonzero_indices()[0]
    if i == 0:
        return eq, 0
    if eq.degree - i < 1:
        raise DegenerateEquation("only the top coefficient is nonzero, which forces F = 0", degree=eq.degree)
    return MahlerEquation(eq.base, eq.coeffs[i:], FracPoly()), i


def invert_base(eq: MahlerEquation) -> Reduction:
    """
    Equation with base q/p > 1 for G(x) = F(x^(p^d)), from a base p/q < 1

    Coefficient j of the result is P_(d-j)(x^(q^d)).
    """
    if not eq.is_rational_base:
        raise SymbolicBaseUnsupported("invert_base needs a rational base", base=str(eq.base))
    alpha = eq.rational_base
    if alpha > 1:
        raise BaseAlreadyAboveOne("base is already above one", base=str(alpha))
    p, q, d = alpha.numerator, alpha.denominator, eq.degree
    scale = q ** d
    coeffs = tuple(_substitute_poly(eq.coeffs[d - j], scale) for j in range(d + 1))
    inverted = MahlerEquation(Exponent.rational(Fraction(q, p)), coeffs, _substitute_poly(eq.rhs, scale))
    return Reduction(inverted, Exponent.rational(p ** d), f"invert_base: G(x) = F(x^{p ** d})")


def shift_equation(eq: MahlerEquation, r) -> MahlerEquation:
    """Equation satisfied by F(x^r): every coefficient and the rhs evaluated at x^r"""
    r = Exponent.coerce(r)
    return MahlerEquation(
        eq.base,
        tuple(_substitute_poly(P, r) for P in eq.coeffs),
        _substitute_poly(eq.rhs, r),
    )


def reduce_to_standard_form(eq: MahlerEquation) -> List[Reduction]:
    """
    Homogenize, move the base above one and normalize the leading term

    The composed witness is the product of the listed witnesses.
    """
    steps: List[Reduction] = []
    current = eq
    if not current.is_homogeneous:
        step = homogenize(current)
        steps.append(step)
        current = step.equation
    if current.is_rational_base and current.rational_base < 1:
        step = invert_base(current)
        steps.append(step)
        current = step.equation
    normalized, i = normalize_leading(current)
    if i:
        steps.append(Reduction(normalized, current.base_power(i), f"normalize_leading: G(x) = F(x^(base^{i}))"))
    return steps


def composed_witness(steps: List[Reduction]) -> Exponent:
    witness = Exponent.rational(1)
    for step in steps:
        witness = exp_mul(witness, step.witness)
    return witness


def valuation_candidates(eq: MahlerEquation) -> List[Tuple[int, int, Optional[Exponent]]]:
    """(i, j, solution or None) for every pair of nonzero coefficients"""
    if not eq.is_homogeneous:
        raise PreconditionViolation("admissible valuations need a homogeneous equation")
    indices = eq.nonzero_indices()
    if len(indices) < 2:
        raise DegenerateEquation("fewer than two nonzero coefficients", indices=indices)
    c = {i: eq.coeffs[i].terms[0][0] for i in indices}
    out = []
    if eq.is_rational_base and all(v.rational_value is not None for v in c.values()):
        alpha = eq.rational_base
        for a, i in enumerate(indices):
            for j in indices[a + 1:]:
                value = (c[i].rational_value - c[j].rational_value) / (alpha ** j - alpha ** i)
                out.append((i, j, Exponent.rational(value)))
        return out
    context = eq.context
    base = to_sympy(eq.base)
    for a, i in enumerate(indices):
        for j in indices[a + 1:]:
            quotient = laurent_quotient(to_sympy(c[i]) - to_sympy(c[j]), base ** j - base ** i)
            out.append((i, j, from_sympy(quotient, context) if quotient is not None else None))
    return out


def admissible_valuations(eq: MahlerEquation) -> List[Exponent]:
    """
    Candidate valuations of a nonzero solution: (c_i - c_j) / (base^j - base^i)

    Symbolic pairs whose quotient is not a Laurent polynomial in the scales
    are excluded.
    """
    values = {v for _i, _j, v in valuation_candidates(eq) if v is not None}
    return sorted(values)
