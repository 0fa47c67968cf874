"""
p-adic witnesses and the lattice intersection that pushes a support into Z
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from app.combination.span import combine_bases
from app.core.exponent import Exponent
from app.core.valuation import ell_adic_valuation, prime_support, ring_generator, ring_membership
from app.errors import HahnMahlerError, PreconditionViolation
from app.mahler.equation import MahlerEquation, NotFound, check_equation
from app.mahler.reductions import shift_equation
from app.rationality.certify import RationalCertificate, certify_rational
from app.series.hahn import SupportSet, TruncatedHahnSeries, substitute, support
from app.support.classes import decompose, rescale_to_lattice

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


def _candidate_pairs(bound: int):
    """(n, m) != (0, 0), first nonzero entry positive, by |n|+|m| then n then m"""
    pairs = [
        (n, m)
        for n in range(0, bound + 1)
        for m in range(-bound, bound + 1)
        if (n, m) != (0, 0) and (n > 0 or m > 0)
    ]
    return sorted(pairs, key=lambda nm: (abs(nm[0]) + abs(nm[1]), nm[0], nm[1]))


def padic_witness(alpha, beta, p: int, bound: int) -> Union[Pair, NotFound]:
    """
    Least (n, m) with |n|, |m| <= bound and n*v_p(alpha) + m*v_p(beta) = 0

    Returns:
        the pair, or NotFound when the bound is too small
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha <= 0 or beta <= 0:
        raise PreconditionViolation("bases must be positive", alpha=str(alpha), beta=str(beta))
    va = ell_adic_valuation(alpha, p)
    vb = ell_adic_valuation(beta, p)
    for n, m in _candidate_pairs(bound):
        if n * va + m * vb == 0:
            return n, m
    return NotFound(f"no pair with |n|, |m| <= {bound} balances the {p}-adic valuations")


def witness_pairs_for_support(S: Sequence[Exponent], alpha, beta, bound: int) -> Dict[int, Union[Pair, NotFound]]:
    """padic_witness for every prime of a support denominator or of alpha and beta"""
    denominators = []
    for e in S:
        if e.rational_value is None:
            raise PreconditionViolation("witness search needs rational exponents", exponent=str(e))
        denominators.append(Fraction(1, e.rational_value.denominator))
    primes = prime_support(alpha, beta, *denominators)
    return {p: padic_witness(alpha, beta, p, bound) for p in primes}


def lattice_intersection_filter(S: Sequence[Exponent], pairs: Sequence[Pair], alpha, beta) -> SupportSet:
    """Exponents lying in Z[gamma, 1/gamma] for gamma = alpha^n beta^m over every pair"""
    alpha, beta = Fraction(alpha), Fraction(beta)
    generators = [ring_generator(alpha ** n * beta ** m) for n, m in pairs]
    kept = []
    for e in S:
        if e.rational_value is None:
            raise PreconditionViolation("lattice filter needs rational exponents", exponent=str(e))
        if all(ring_membership(e.rational_value, g) for g in generators):
            kept.append(e)
    logger.debug(f"Lattice filter kept {len(kept)} of {len(S)} exponent(s) over rings {generators}")
    return tuple(kept)


@dataclass
class PipelineReport:
    classes: int = 0
    rescale: int = 1
    pairs: Dict[int, Union[Pair, NotFound]] = field(default_factory=dict)
    combined: List[Tuple[Pair, str, int, str]] = field(default_factory=list)
    removed: Tuple[Exponent, ...] = ()
    certificate: Optional[Union[RationalCertificate, NotFound]] = None
    failure: Optional[str] = None


def rational_pipeline(
    F: TruncatedHahnSeries,
    eq_a: MahlerEquation,
    eq_b: MahlerEquation,
    bound: int,
    deg_max: int,
) -> PipelineReport:
    """
    decompose -> rescale_to_lattice -> combine_bases -> lattice filter -> certify

    Every stage is recorded; a stage that raises stops the run with its message.
    """
    report = PipelineReport()
    alpha, beta = eq_a.rational_base, eq_b.rational_base
    try:
        report.classes = len(decompose(F, alpha))
        l, G = rescale_to_lattice(F, alpha)
        report.rescale = l
        eq_a_l, eq_b_l = shift_equation(eq_a, l), shift_equation(eq_b, l)

        report.pairs = witness_pairs_for_support(support(G), alpha, beta, bound)
        found = sorted({pair for pair in report.pairs.values() if not isinstance(pair, NotFound)})
        for n, m in found:
            if alpha ** n * beta ** m == 1:
                continue
            step = combine_bases(eq_a_l, eq_b_l, n, m)
            verdict = check_equation(substitute(G, step.witness), step.equation)
            report.combined.append(((n, m), str(step.equation.base), step.equation.degree, verdict.kind))

        kept = lattice_intersection_filter(support(G), found, alpha, beta)
        report.removed = tuple(e for e in support(G) if e not in kept)
        if report.removed:
            report.failure = "support is not integral"
            return report
        report.certificate = certify_rational(G, deg_max)
    except HahnMahlerError as exc:
        report.failure = f"{type(exc).__name__}: {exc}"
        logger.warning(f"Pipeline stopped: {report.failure}")
    return report
