"""
Fraction-free Gauss-Jordan elimination over an exact integral domain
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, List, Sequence, Tuple

from app.errors import PreconditionViolation

logger = logging.getLogger(__name__)

Matrix = List[List[Any]]


@dataclass(frozen=True)
class Domain:
    """Ring elements as used by the elimination: zero, one and exact division"""

    zero: Any
    one: Any
    exquo: Callable[[Any, Any], Any]


def _int_exquo(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise PreconditionViolation("inexact division during elimination", dividend=a, divisor=b)
    return q


INTEGERS = Domain(0, 1, _int_exquo)
RATIONALS = Domain(Fraction(0), Fraction(1), lambda a, b: a / b)


def polynomial_domain(ring) -> Domain:
    """Domain view of a sympy PolyRing"""
    return Domain(ring.zero, ring.one, lambda a, b: a.exquo(b))


def fraction_free_rref(M: Sequence[Sequence[Any]], domain: Domain = INTEGERS) -> Tuple[Matrix, List[int], Any]:
    """
    Reduced row echelon form without fractions

    Every step replaces E[i][j] by (piv*E[i][j] - E[i][c]*E[r][j]) / prev,
    an exact division in the domain.

    Args:
        M: matrix rows
        domain: arithmetic of the entries

    Returns:
        (E, pivot columns, den) where every pivot entry of E equals den
    """
    E = [list(row) for row in M]
    if not E:
        return E, [], domain.one
    n_rows, n_cols = len(E), len(E[0])
    prev = domain.one
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        for i in range(r, n_rows):
            if E[i][c] != domain.zero:
                break
        else:
            continue
        if i != r:
            E[r], E[i] = E[i], E[r]
        piv = E[r][c]
        for i in range(n_rows):
            if i == r:
                continue
            factor = E[i][c]
            row_i, row_r = E[i], E[r]
            for j in range(n_cols):
                if j == c:
                    continue
                row_i[j] = domain.exquo(piv * row_i[j] - factor * row_r[j], prev)
            row_i[c] = domain.zero
        prev = piv
        pivots.append(c)
        r += 1
        logger.debug(f"Pivot {r} at column {c}")
    return E, pivots, prev


def nullspace(M: Sequence[Sequence[Any]], domain: Domain = INTEGERS) -> List[List[Any]]:
    """
    Right kernel basis with entries in the domain

    For each free column f: x_f = den, x_(pivot k) = -E[k][f].
    """
    if not M:
        return []
    n_cols = len(M[0])
    E, pivots, den = fraction_free_rref(M, domain)
    basis = []
    for f in range(n_cols):
        if f in pivots:
            continue
        vector = [domain.zero] * n_cols
        vector[f] = den
        for k, p in enumerate(pivots):
            vector[p] = -E[k][f]
        basis.append(vector)
    return basis


def left_kernel(rows: Sequence[Sequence[Any]], domain: Domain = INTEGERS) -> List[List[Any]]:
    """Vectors y with sum_j y_j * rows[j] = 0"""
    if not rows:
        return []
    transposed = [list(col) for col in zip(*rows)]
    if not transposed:
        return [[domain.one if k == j else domain.zero for k in range(len(rows))] for j in range(len(rows))]
    return nullspace(transposed, domain)
