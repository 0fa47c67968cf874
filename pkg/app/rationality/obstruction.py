"""
Valuation obstructions

A nonzero solution has its valuation among the candidates
(c_i - c_j) / (base^j - base^i) of each of its equations. Two equations in
algebraically independent symbolic bases can only share a candidate when the
quotients agree identically.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import sympy

from app.core.exponent import Exponent
from app.core.symbolic import from_sympy, to_sympy
from app.errors import PreconditionViolation, SymbolicBaseUnsupported, SymbolicOnly
from app.mahler.equation import MahlerEquation
from app.mahler.reductions import valuation_candidates
from app.mahler.solver import Obstruction

logger = logging.getLogger(__name__)

IndexPair = Tuple[int, int]


@dataclass(frozen=True)
class ValuationObstruction:
    """Index pairs of both equations and the constraint each imposes on v(F)"""

    base: str
    pairs_a: Tuple[IndexPair, ...]
    pairs_b: Tuple[IndexPair, ...]
    constraints: Tuple[str, ...]


@dataclass(frozen=True)
class Infeasible:
    obstruction: ValuationObstruction

    kind = "Infeasible"


def _candidate_expressions(eq: MahlerEquation) -> List[Tuple[IndexPair, sympy.Expr]]:
    base = to_sympy(eq.base)
    out = []
    for i, j, _value in valuation_candidates(eq):
        c_i = to_sympy(eq.coeffs[i].terms[0][0])
        c_j = to_sympy(eq.coeffs[j].terms[0][0])
        out.append(((i, j), sympy.cancel((c_i - c_j) / (base ** j - base ** i))))
    return out


def _constraint(eq: MahlerEquation, pair: IndexPair) -> str:
    i, j = pair
    base = to_sympy(eq.base)
    return f"({sympy.sstr(base ** i - base ** j)})*v in Z"


def joint_valuation_consistency(
    eq_a: MahlerEquation,
    eq_b: Optional[MahlerEquation],
) -> Union[List[Exponent], Infeasible]:
    """
    Valuations allowed by both equations

    Returns:
        the shared candidates, or Infeasible with every index pair recorded
    """
    if eq_b is None:
        raise PreconditionViolation("joint valuation consistency needs two equations")
    if eq_a.is_rational_base or eq_b.is_rational_base:
        raise SymbolicOnly("rational bases go through the p-adic lattice pipeline")
    context = eq_a.context or eq_b.context
    if context is None or not context.independent:
        raise PreconditionViolation("bases must be registered as algebraically independent")

    cands_a = _candidate_expressions(eq_a)
    cands_b = _candidate_expressions(eq_b)
    feasible = []
    for _pair_a, value_a in cands_a:
        for _pair_b, value_b in cands_b:
            if sympy.cancel(value_a - value_b) == 0:
                exponent = from_sympy(value_a, context)
                if exponent is not None and exponent not in feasible:
                    feasible.append(exponent)
    if feasible:
        logger.info(f"{len(feasible)} shared valuation candidate(s)")
        return sorted(feasible)

    constraints = tuple(_constraint(eq_a, p) for p, _ in cands_a) + tuple(_constraint(eq_b, p) for p, _ in cands_b)
    obstruction = ValuationObstruction(
        base=f"{eq_a.base} / {eq_b.base}",
        pairs_a=tuple(p for p, _ in cands_a),
        pairs_b=tuple(p for p, _ in cands_b),
        constraints=constraints,
    )
    logger.info(f"No shared valuation across {len(cands_a)} x {len(cands_b)} candidate pairs")
    return Infeasible(obstruction)


def minimal_exponent_obstruction(eq: MahlerEquation) -> Union[List[Exponent], Obstruction]:
    """
    Integer valuation candidates of a rational, non-integer base

    A Laurent solution needs its valuation to be one of these. When none is
    an integer the minimal terms never cancel and an Obstruction is returned.
    """
    if not eq.is_rational_base:
        raise SymbolicBaseUnsupported("minimal exponent check needs a rational base", base=str(eq.base))
    if eq.rational_base.denominator == 1:
        raise PreconditionViolation("base is an integer", base=str(eq.base))
    candidates = valuation_candidates(eq)
    integers = sorted({v for _i, _j, v in candidates if v is not None and v.rational_value.denominator == 1})
    if integers:
        return integers
    i, j, v = candidates[0]
    zero = Exponent.rational(0)
    return Obstruction(
        exponent=v if v is not None else zero,
        position=v if v is not None else zero,
        reason="no admissible valuation is an integer",
        residual_coeff=eq.coeffs[i].lowest_coefficient,
        indices=(i, j),
    )
