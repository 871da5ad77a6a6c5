# core/exact.py
"""Exact rational matrix helpers on top of sympy's DomainMatrix over QQ."""
from fractions import Fraction
from typing import List, Sequence

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from core.exceptions import MetricError

RationalMatrix = List[List[Fraction]]


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def to_domain(rows: Sequence[Sequence]) -> DomainMatrix:
    fracs = [[Fraction(x) for x in row] for row in rows]
    return DomainMatrix.from_list([[(f.numerator, f.denominator) for f in row] for row in fracs], QQ)


def to_fractions(m: DomainMatrix) -> RationalMatrix:
    return [[_to_fraction(x) for x in row] for row in m.to_list()]


def inverse(rows: Sequence[Sequence]) -> RationalMatrix:
    m = to_domain(rows)
    if m.det() == QQ(0):
        raise MetricError("matrix is singular", shape=m.shape)
    return to_fractions(m.inv())


def determinant(rows: Sequence[Sequence]) -> Fraction:
    return _to_fraction(to_domain(rows).det())


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> RationalMatrix:
    return to_fractions(to_domain(a).matmul(to_domain(b)))


def transpose(rows: Sequence[Sequence]) -> RationalMatrix:
    return [list(col) for col in zip(*[[Fraction(x) for x in row] for row in rows])]


def identity(n: int) -> RationalMatrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def trace(m: DomainMatrix) -> Fraction:
    rows = m.to_list()
    return sum((_to_fraction(rows[i][i]) for i in range(len(rows))), Fraction(0))


def faddeev_leverrier(rows: Sequence[Sequence]) -> List[Fraction]:
    """Coefficients [1, a_1, ..., a_n] of det(λI - A) = Σ a_k λ^(n-k).

    N_0 = I; a_k = -tr(A N_{k-1}) / k; N_k = A N_{k-1} + a_k I.
    """
    a = to_domain(rows)
    n = a.shape[0]
    eye = DomainMatrix.eye(n, QQ).to_dense()
    coeffs = [Fraction(1)]
    acc = eye
    for k in range(1, n + 1):
        prod = a.matmul(acc)
        ak = -trace(prod) / k
        coeffs.append(ak)
        acc = prod + eye.scalarmul(QQ(ak.numerator, ak.denominator))
    return coeffs


def sympy_charpoly(rows: Sequence[Sequence]) -> List[Fraction]:
    """Same coefficients from sympy's division-free algorithm (cross-check)."""
    return [_to_fraction(c) for c in to_domain(rows).charpoly()]


def batched_char_poly(mats: np.ndarray) -> np.ndarray:
    """Faddeev–LeVerrier on a stack of integer matrices, exact in int64.

    Returns (N, n + 1) coefficients c_s = (-1)^s a_s, the signed principal
    minor sums. Each trace is divisible by its step for integer input.
    """
    mats = np.asarray(mats, dtype=np.int64)
    count, n, _ = mats.shape
    eye = np.broadcast_to(np.eye(n, dtype=np.int64), mats.shape)
    out = np.zeros((count, n + 1), dtype=np.int64)
    out[:, 0] = 1
    acc = eye.copy()
    for k in range(1, n + 1):
        prod = mats @ acc
        tr = np.trace(prod, axis1=1, axis2=2)
        if np.any(tr % k):
            raise ArithmeticError(f"trace not divisible by {k}; matrices are not integral")
        ak = -tr // k
        out[:, k] = ak if k % 2 == 0 else -ak
        acc = prod + ak[:, None, None] * eye
    return out
