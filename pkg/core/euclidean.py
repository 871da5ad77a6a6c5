# core/euclidean.py
"""SOCM coefficients in the orthonormal blade basis e_I of the embedding space.

The invariants are basis-free multivectors, but their zero pattern is not:
the simple-root blades a_I are not orthogonal, so the count of vanishing
coefficients there depends on the ordering. In the orthonormal frame it is a
constant of the algebra. Coefficients are stored at EUCLIDEAN_SCALE times
their value; A8 and E8 carry half-integers.

A grade-k simple-root blade expands as a_K = Σ_L det(W[K, L]) / 2^{3k/2} e_L,
W holding the doubled root coordinates (each unit root is w / (2√2)).
"""
import logging
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from core import exact
from core.coxeter import EVEN_GRADES, ORDERS, SOCM_WIDTH, subset_wedges
from core.exceptions import KernelInvariantError
from core.ga import DIMENSION, CayleyTable, Multivector, build_cayley_table, gp, grade_masks, reverse, wedge_chain
from core.root_systems import RootSystem, build_root_system, validate_permutation
from schemas.algebra import AlgebraKind

logger = logging.getLogger(__name__)

EUCLIDEAN_SCALE = 2
CHUNK_ROWS = 4096
_FLOAT_EXACT = 1 << 52
_INT64_SAFE = 1 << 62

_BLADES = 1 << DIMENSION


@lru_cache(maxsize=None)
def orthonormal_table() -> CayleyTable:
    return build_cayley_table(exact.identity(DIMENSION))


@lru_cache(maxsize=None)
def blade_compounds(kind: AlgebraKind) -> Tuple[Tuple[np.ndarray, np.ndarray, int, int], ...]:
    """Per even grade k: blade masks, wedge compound of the doubled roots, multiplier, shift.

    Stored coefficient of e_L = multiplier * Σ_K c_K compound[K, L] >> shift.
    """
    rs = build_root_system(kind)
    chain = wedge_chain(rs.euclidean)
    blocks = []
    for k in EVEN_GRADES:
        masks = grade_masks(k, DIMENSION)
        compound = chain[np.ix_(masks, masks)].astype(np.int64)
        multiplier = EUCLIDEAN_SCALE if k == 0 else 1
        shift = 3 * k // 2 - 1 if k else 0
        blocks.append((masks, compound, multiplier, shift))
    logger.debug("%s orthonormal compounds ready", rs.kind.label)
    return tuple(blocks)


def euclidean_rows(kind: AlgebraKind, socm: np.ndarray) -> np.ndarray:
    """(rows, 2304) simple-root coefficients re-expressed in the orthonormal frame.

    Odd-grade columns are zero in any frame. Raises KernelInvariantError when
    a coefficient is not a multiple of 1 / EUCLIDEAN_SCALE, which no genuine
    SOCM row produces.
    """
    kind = AlgebraKind(kind)
    socm = np.asarray(socm)
    if socm.ndim != 2 or socm.shape[1] != SOCM_WIDTH:
        raise KernelInvariantError("SOCM block must be rows x 2304", shape=socm.shape)
    if socm.shape[0] == 0:
        return np.zeros((0, SOCM_WIDTH), dtype=np.int16)
    chunks = [
        _convert_chunk(kind, socm[start:start + CHUNK_ROWS], start) for start in range(0, socm.shape[0], CHUNK_ROWS)
    ]
    return np.concatenate(chunks)


def _convert_chunk(kind: AlgebraKind, socm: np.ndarray, offset: int) -> np.ndarray:
    blocks = socm.astype(np.int64).reshape(-1, ORDERS, _BLADES)
    out = np.zeros_like(blocks)
    for masks, compound, multiplier, shift in blade_compounds(kind):
        coeffs = blocks[:, :, masks]
        bound = int(np.abs(coeffs).max(initial=0)) * int(np.abs(compound).max()) * masks.size * multiplier
        if bound < _FLOAT_EXACT:
            num = np.rint(coeffs.astype(np.float64) @ compound.astype(np.float64)).astype(np.int64)
        elif bound < _INT64_SAFE:
            num = coeffs @ compound
        else:
            raise KernelInvariantError("coefficients too large for the orthonormal conversion", algebra=kind.label, bound=bound)
        num *= multiplier
        inexact = (num & ((1 << shift) - 1)) != 0
        if inexact.any():
            row, order, col = (int(x[0]) for x in np.nonzero(inexact))
            raise KernelInvariantError(
                "coefficient is not a half-integer in the orthonormal frame",
                algebra=kind.label,
                row=offset + row,
                order=order,
                blade=int(masks[col]),
            )
        out[:, :, masks] = num >> shift
    out = out.reshape(-1, SOCM_WIDTH)
    return out.astype(np.int16) if int(np.abs(out).max(initial=0)) <= np.iinfo(np.int16).max else out


def zero_counts(kind: AlgebraKind, socm: np.ndarray) -> np.ndarray:
    return (euclidean_rows(kind, socm) == 0).sum(axis=1)


# -- direct route -----------------------------------------------------------------


def reflection(root: Sequence[int]) -> List[List[Fraction]]:
    """x -> x - (w·x) w / 4 for a doubled root w."""
    return [
        [Fraction(int(i == j)) - Fraction(int(root[i]) * int(root[j]), 4) for j in range(DIMENSION)]
        for i in range(DIMENSION)
    ]


def euclidean_map(rs: RootSystem, p: Sequence[int]) -> List[List[Fraction]]:
    """Orthonormal-coordinate matrix of f = s_{p7} ∘ ... ∘ s_{p0}."""
    m = exact.identity(DIMENSION)
    for i in validate_permutation(p, rs.n):
        m = exact.matmul(reflection(rs.euclidean[i]), m)
    return m


def socm_euclidean(rs: RootSystem, p: Sequence[int]) -> np.ndarray:
    """Stored orthonormal-frame row built from Σ_S reverse(e_S) f(e_S) directly."""
    m = euclidean_map(rs, p)
    images = [Multivector.vector([m[i][j] for i in range(DIMENSION)], DIMENSION) for j in range(DIMENSION)]
    wedges = subset_wedges(images, DIMENSION)
    table = orthonormal_table()
    invariants = []
    for r in range(ORDERS):
        total = Multivector.zero(DIMENSION)
        for s in grade_masks(r, DIMENSION):
            s = int(s)
            total = total + gp(reverse(Multivector.blade(s, 1, DIMENSION)), wedges[s], table)
        scaled = total.scale(EUCLIDEAN_SCALE)
        if not scaled.is_integral():
            raise KernelInvariantError(
                "orthonormal invariant is not a half-integer multivector",
                algebra=rs.kind.label,
                permutation=tuple(int(x) for x in p),
                order=r,
            )
        invariants.append(scaled.integer_coefficients())
    return np.concatenate(invariants).astype(np.int64)
