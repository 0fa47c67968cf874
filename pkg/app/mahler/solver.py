"""
Forward coefficient propagation for homogeneous Mahler equations

Each term f_t x^t of F first shows up in the operator at
m(t) = min_i (c_i + base^i t), with c_i = v(P_i), carrying the factor
D(t) = sum of the lowest coefficients of the P_i attaining the minimum.
Visiting the residual in increasing exponent order therefore fixes every
coefficient above the seeded prefix, or exposes a term that cannot cancel.
"""
from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from app.config import get_settings
from app.core.exponent import Exponent, exp_add, exp_div_monomial, exp_max, exp_min, exp_mul, exp_sub
from app.errors import AmbiguousContinuation, PreconditionViolation, SeedInconsistent, SolverLimitExceeded
from app.mahler.equation import MahlerEquation
from app.mahler.reductions import valuation_candidates
from app.series.hahn import TruncatedHahnSeries, in_rational_coset, series_from_terms

logger = logging.getLogger(__name__)

Seed = Tuple[Union[Exponent, Fraction, int, str], Union[Fraction, int, str]]


@dataclass(frozen=True)
class Obstruction:
    """A residual term at `exponent` that no coefficient can cancel"""

    exponent: Exponent
    position: Exponent
    reason: str
    residual_coeff: Fraction
    indices: Tuple[int, ...]

    kind = "Obstruction"


@dataclass(frozen=True)
class MinimalTermProfile:
    exponent: Exponent
    indices: Tuple[int, ...]
    combined_coeff: Fraction


class _Operator:
    """Precomputed lowest exponents, lowest coefficients and base powers"""

    def __init__(self, eq: MahlerEquation):
        self.eq = eq
        self.indices = eq.nonzero_indices()
        self.c = {i: eq.coeffs[i].terms[0][0] for i in self.indices}
        self.lc = {i: eq.coeffs[i].lowest_coefficient for i in self.indices}
        self.powers = {i: eq.base_power(i) for i in self.indices}
        self.rational = eq.is_rational_base and all(
            e.rational_value is not None for P in eq.coeffs for e, _ in P.terms
        )

    def image(self, i: int, t: Exponent) -> Exponent:
        return exp_add(self.c[i], exp_mul(self.powers[i], t))

    def profile(self, t: Exponent) -> MinimalTermProfile:
        images = {i: self.image(i, t) for i in self.indices}
        low = exp_min(images.values())
        attaining = tuple(i for i in self.indices if images[i] == low)
        return MinimalTermProfile(low, attaining, sum((self.lc[i] for i in attaining), Fraction(0)))

    def position(self, e: Exponent) -> Exponent:
        """The unique t with m(t) = e"""
        return exp_max(exp_div_monomial(exp_sub(e, self.c[i]), self.powers[i]) for i in self.indices)


def minimal_term_profile(eq: MahlerEquation, t) -> MinimalTermProfile:
    """Which summands attain min_i (c_i + base^i t) and their combined lowest coefficient"""
    return _Operator(eq).profile(Exponent.coerce(t))


def _check_preconditions(eq: MahlerEquation) -> None:
    if not eq.is_homogeneous:
        raise PreconditionViolation("solve_equation needs a homogeneous equation; homogenize first")
    if eq.coeffs[0].is_zero:
        raise PreconditionViolation("solve_equation needs P_0 != 0; normalize_leading first")
    if not eq.base > 1:
        raise PreconditionViolation("solve_equation needs base > 1; invert_base first", base=str(eq.base))


def solve_equation(
    eq: MahlerEquation,
    seeds: Sequence[Seed],
    theta,
    max_terms: Optional[int] = None,
    lattice: Optional[Fraction] = None,
) -> Union[TruncatedHahnSeries, Obstruction]:
    """
    Unique continuation below theta of a seeded prefix

    Args:
        eq: homogeneous equation with P_0 != 0 and base > 1
        seeds: (exponent, coefficient) pairs; F is exactly the seeds up to the largest seeded exponent
        theta: cutoff of the returned series
        max_terms: cap on propagated terms, defaults to settings.solver_max_terms
        lattice: when given, F is restricted to support in lattice*Z (1 for Laurent series)

    Returns:
        the series below theta, or an Obstruction when some residual term cannot cancel
    """
    _check_preconditions(eq)
    theta = Exponent.coerce(theta)
    limit = max_terms or get_settings().solver_max_terms
    op = _Operator(eq)

    fixed: Dict[Exponent, Fraction] = {}
    for e, c in seeds:
        e = Exponent.coerce(e)
        if not e < theta:
            raise PreconditionViolation("seed at or above the cutoff", exponent=str(e), cutoff=str(theta))
        if Fraction(c) != 0:
            fixed[e] = fixed.get(e, Fraction(0)) + Fraction(c)
    fixed = {e: c for e, c in fixed.items() if c != 0}
    if not fixed:
        return TruncatedHahnSeries()

    least_seed = exp_min(fixed)
    prefix_end = exp_max(fixed)
    horizon = op.profile(theta).exponent
    key = (lambda e: e.rational_value) if op.rational and all(e.rational_value is not None for e in fixed) else (lambda e: e)

    residual: Dict[Exponent, Fraction] = {}
    heap: List = []
    counter = itertools.count()

    def push(e: Exponent) -> None:
        heapq.heappush(heap, (key(e), next(counter), e))

    def contribute(t: Exponent, f: Fraction) -> None:
        for i in op.indices:
            scaled = exp_mul(op.powers[i], t)
            for c, coeff in eq.coeffs[i].terms:
                e = exp_add(c, scaled)
                if not e < horizon:
                    continue
                if e not in residual:
                    push(e)
                residual[e] = residual.get(e, Fraction(0)) + f * coeff

    for t, f in fixed.items():
        contribute(t, f)

    # positions where the minimal terms cancel identically: the coefficient there is free
    for _i, _j, t in valuation_candidates(eq):
        if t is None or not (least_seed < t < theta) or t <= prefix_end:
            continue
        if op.profile(t).combined_coeff == 0:
            push(op.profile(t).exponent)

    solution: Dict[Exponent, Fraction] = dict(fixed)
    visited = set()
    while heap:
        _, _, e = heapq.heappop(heap)
        if e in visited:
            continue
        visited.add(e)
        r = residual.pop(e, Fraction(0))
        t = op.position(e)
        profile = op.profile(t)
        if t <= prefix_end:
            if r == 0:
                continue
            if t == least_seed:
                logger.debug(f"Obstruction at valuation level x^({e})")
                return Obstruction(e, t, "minimal terms at the seeded valuation cannot cancel", r, profile.indices)
            raise SeedInconsistent("seeded prefix leaves a nonzero residual", exponent=str(e), residual=str(r))
        if profile.combined_coeff == 0:
            if r != 0:
                return Obstruction(e, t, "leading coefficients cancel but the residual does not vanish", r, profile.indices)
            raise AmbiguousContinuation("free coefficient above the seeded valuation was not seeded", exponent=t)
        if r == 0:
            continue
        if lattice is not None and not in_rational_coset(t, Fraction(lattice)):
            return Obstruction(e, t, f"cancelling x^({e}) needs a coefficient off the lattice {lattice}*Z", r, profile.indices)
        f = -r / profile.combined_coeff
        solution[t] = f
        if len(solution) > limit:
            raise SolverLimitExceeded("coefficient propagation exceeded the term cap", limit=limit)
        contribute(t, f)
        # f_t itself cancels the residual at e
        residual.pop(e, None)

    logger.debug(f"Propagated {len(solution)} terms below {theta}")
    return series_from_terms(solution.items(), theta)
