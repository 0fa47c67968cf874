"""Assertion helpers"""
from fractions import Fraction


def coeff_lists(eq):
    """Dense coefficient lists of an integer-exponent equation"""
    out = []
    for P in eq.coeffs:
        top = int(P.terms[-1][0].rational_value) if P.terms else -1
        dense = [Fraction(0)] * (top + 1)
        for e, c in P.terms:
            dense[int(e.rational_value)] = c
        out.append(dense)
    return out
