"""
Number theory helpers: l-adic valuations and membership in Z[1/n]
"""
import logging
import math
from fractions import Fraction
from typing import Iterable, List, Tuple, Union

import sympy

from app.errors import PreconditionViolation, ZeroInput

logger = logging.getLogger(__name__)


def ell_adic_valuation(a: Union[Fraction, int], ell: int) -> int:
    """
    l-adic valuation of a nonzero rational

    Args:
        a: nonzero rational
        ell: prime

    Returns:
        multiplicity of ell in the numerator minus multiplicity in the denominator
    """
    a = Fraction(a)
    if a == 0:
        raise ZeroInput("valuation of zero is undefined", ell=ell)
    if not sympy.isprime(ell):
        raise PreconditionViolation("ell must be prime", ell=ell)
    return int(sympy.multiplicity(ell, abs(a.numerator))) - int(sympy.multiplicity(ell, a.denominator))


def prime_support(*values: Union[Fraction, int]) -> List[int]:
    """Sorted primes dividing a numerator or denominator of any value"""
    primes = set()
    for v in values:
        v = Fraction(v)
        for part in (abs(v.numerator), v.denominator):
            if part > 1:
                primes.update(sympy.factorint(part))
    return sorted(primes)


def split_coprime(b: int, n: int) -> Tuple[int, int]:
    """b = b1 * b2 where b1 has only primes of n and gcd(b2, n) = 1"""
    b1, b2 = 1, b
    g = math.gcd(b2, n)
    while g > 1:
        b2 //= g
        b1 *= g
        g = math.gcd(b2, n)
    return b1, b2


def ring_membership(a: Union[Fraction, int], n: int) -> bool:
    """a in Z[1/n]: the reduced denominator divides a power of n"""
    if n < 1:
        raise PreconditionViolation("ring generator must be a positive integer", n=n)
    a = Fraction(a)
    return split_coprime(a.denominator, n)[1] == 1


def ring_generator(gamma: Union[Fraction, int]) -> int:
    """Z[gamma, 1/gamma] = Z[1/n] for gamma = u/w in lowest terms, n = u*w"""
    gamma = Fraction(gamma)
    if gamma <= 0:
        raise PreconditionViolation("ring generator needs a positive rational", gamma=gamma)
    return gamma.numerator * gamma.denominator


def lcm_all(values: Iterable[int]) -> int:
    return math.lcm(1, *values)
