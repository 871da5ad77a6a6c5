# core/coxeter.py
"""Coxeter versors, their orthogonal maps and simplicial-derivative invariants.

A Coxeter versor is W = a_{p0} a_{p1} ... a_{p7}; it acts on vectors by
x -> W~ x W. The set of characteristic multivectors (SOCM) of W is the tuple
Inv_0..Inv_8 with Inv_r = Σ_{|S|=r} (a^{S})~ (b_S), a^S the ascending wedge of
reciprocal frame vectors and b_S the ascending wedge of image vectors
b_j = W~ a_j W.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core import exact
from core.exceptions import GradeError, KernelInvariantError
from core.ga import (
    DIMENSION,
    Multivector,
    blade_grades,
    grade_masks,
    gp,
    grade_project,
    require_grade,
    reverse,
    reverse_signs,
    scalar_part,
    wedge,
    wedge_chain,
)
from core.root_systems import Permutation, RootSystem, build_root_system, validate_permutation
from schemas.algebra import AlgebraKind

logger = logging.getLogger(__name__)

ORDERS = DIMENSION + 1
EVEN_GRADES = (0, 2, 4, 6, 8)
SOCM_WIDTH = ORDERS * (1 << DIMENSION)

_INT64_SAFE = 1 << 62


@dataclass(frozen=True, eq=False)
class Versor:
    value: Multivector
    permutation: Permutation
    kind: AlgebraKind


@dataclass(frozen=True, eq=False)
class SOCM:
    invariants: Tuple[Multivector, ...]
    source_permutation: Permutation
    algebra: AlgebraKind

    def coefficients(self) -> np.ndarray:
        """The 2304 integer coefficients, order ascending then blade mask ascending."""
        return np.concatenate([inv.integer_coefficients() for inv in self.invariants]).astype(np.int64)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[int], permutation: Sequence[int], algebra: AlgebraKind) -> "SOCM":
        arr = np.asarray(coeffs, dtype=np.int64).reshape(ORDERS, 1 << DIMENSION)
        return cls(
            tuple(Multivector(row, 1, DIMENSION) for row in arr),
            validate_permutation(permutation),
            AlgebraKind(algebra),
        )


@dataclass(frozen=True)
class Subinvariant:
    order: int
    grade: int
    value: Multivector = field(compare=False)
    coefficients: Tuple[int, ...]


@dataclass(frozen=True)
class MapMatrix:
    """f(a_j) = Σ_i M[i][j] a_i."""

    entries: Tuple[Tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows) -> "MapMatrix":
        return cls(tuple(tuple(Fraction(int(x)) if isinstance(x, (int, np.integer)) else Fraction(x) for x in row) for row in rows))

    def as_lists(self) -> List[List[Fraction]]:
        return [list(row) for row in self.entries]

    def determinant(self) -> Fraction:
        return exact.determinant(self.entries)

    def trace(self) -> Fraction:
        return sum((self.entries[i][i] for i in range(len(self.entries))), Fraction(0))

    def preserves(self, metric) -> bool:
        """Mᵀ G M = G."""
        lhs = exact.matmul(exact.matmul(exact.transpose(self.entries), metric), self.entries)
        return lhs == [list(row) for row in metric]


@dataclass(frozen=True)
class CharPoly:
    """c_s = (-1)^s times the coefficient of λ^(n-s) in det(λI - M)."""

    coefficients: Tuple[Fraction, ...]


# -- versor and map -------------------------------------------------------------


def coxeter_versor(rs: RootSystem, p: Sequence[int]) -> Versor:
    perm = validate_permutation(p, rs.n)
    w = Multivector.scalar(1, rs.n)
    for i in perm:
        w = gp(w, rs.frame[i], rs.table)
    return Versor(w, perm, rs.kind)


def apply_map(W: Versor, x: Multivector) -> Multivector:
    """x -> W~ x W, the orthogonal map of the Coxeter element."""
    require_grade(x, 1, "apply_map input")
    table = build_root_system(W.kind).table
    return gp(reverse(W.value), gp(x, W.value, table), table)


def reflection_product(rs: RootSystem, p: Sequence[int]) -> np.ndarray:
    """Integer matrix of f = s_{p7} ∘ ... ∘ s_{p0}.

    Each unit-root sandwich a x a is the negated reflection, and eight of them
    compose to the plain product of reflections.
    """
    m = np.eye(rs.n, dtype=np.int64)
    for i in validate_permutation(p, rs.n):
        m = rs.reflection_matrix(i) @ m
    return m


def matrix_of_map(rs: RootSystem, W: Versor) -> MapMatrix:
    rows = [[Fraction(0)] * rs.n for _ in range(rs.n)]
    for j in range(rs.n):
        image = apply_map(W, rs.frame[j])
        for i in range(rs.n):
            rows[i][j] = scalar_part(gp(rs.reciprocal[i], image, rs.table))
    return MapMatrix(tuple(tuple(row) for row in rows))


def char_poly(M: MapMatrix) -> CharPoly:
    coeffs = exact.faddeev_leverrier(M.entries)
    return CharPoly(tuple(c if s % 2 == 0 else -c for s, c in enumerate(coeffs)))


# -- simplicial derivative (versor route) ---------------------------------------


def subset_wedges(vectors: Sequence[Multivector], max_grade: int) -> Dict[int, Multivector]:
    """Ascending wedge for every index subset up to max_grade, by top-index DP."""
    n = len(vectors)
    wedges: Dict[int, Multivector] = {0: Multivector.scalar(1, vectors[0].n)}
    for r in range(1, max_grade + 1):
        for s in grade_masks(r, n):
            s = int(s)
            top = s.bit_length() - 1
            wedges[s] = wedge(wedges[s ^ (1 << top)], vectors[top])
    return wedges


@lru_cache(maxsize=None)
def _reciprocal_wedges(kind: AlgebraKind) -> Dict[int, Multivector]:
    rs = build_root_system(kind)
    return subset_wedges(rs.reciprocal, rs.n)


def image_frame(W: Versor) -> Tuple[Multivector, ...]:
    rs = build_root_system(W.kind)
    return tuple(apply_map(W, a) for a in rs.frame)


def simplicial_derivative(rs: RootSystem, W: Versor, r: int, images: Optional[Sequence[Multivector]] = None) -> Multivector:
    """Σ over ascending r-subsets of reverse(a^{j1}∧…∧a^{jr}) · (b_{j1}∧…∧b_{jr})."""
    if not 0 <= r <= rs.n:
        raise GradeError(f"order {r} outside 0..{rs.n}")
    if r == 0:
        return Multivector.scalar(1, rs.n)
    b = list(images) if images is not None else list(image_frame(W))
    return _sum_over_subsets(rs, subset_wedges(b, r), r)


def _sum_over_subsets(rs: RootSystem, image_wedges: Dict[int, Multivector], r: int) -> Multivector:
    recip = _reciprocal_wedges(rs.kind)
    total = Multivector.zero(rs.n)
    for s in grade_masks(r, rs.n):
        s = int(s)
        total = total + gp(reverse(recip[s]), image_wedges[s], rs.table)
    return total


def simplicial_derivatives(rs: RootSystem, W: Versor) -> Tuple[Multivector, ...]:
    image_wedges = subset_wedges(list(image_frame(W)), rs.n)
    return tuple(_sum_over_subsets(rs, image_wedges, r) for r in range(rs.n + 1))


# -- SOCM (batched route) -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FrameProducts:
    """reverse(a^S) · a_K for every pair of equal-grade subsets S, K.

    ``tensors[r]`` has shape (C(n,r), C(n,r), 2**n) over denominator ``dens[r]``.
    """

    tensors: Tuple[np.ndarray, ...]
    dens: Tuple[int, ...]


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> Tuple[np.ndarray, int]:
    den = 1
    for row in rows:
        for x in row:
            den = lcm(den, x.denominator)
    ints = np.array([[int(x * den) for x in row] for row in rows], dtype=object)
    if max(abs(int(v)) for v in ints.ravel()) < _INT64_SAFE:
        ints = ints.astype(np.int64)
    return ints, int(den)


@lru_cache(maxsize=None)
def frame_products(kind: AlgebraKind) -> FrameProducts:
    rs = build_root_system(kind)
    table = rs.table
    recip, d = _integer_rows(rs.gram_inverse)
    chain = wedge_chain(recip)
    tensors, dens = [], []
    for r in range(rs.n + 1):
        masks = grade_masks(r, rs.n)
        arec = chain[np.ix_(masks, masks)] * int(reverse_signs(rs.n)[masks[0]])
        rows = (masks[:, None] * table.size + masks[None, :]).ravel()
        t = table.matrix[rows].toarray().reshape(masks.size, masks.size, table.size)
        bound = int(np.abs(arec).max()) * table.max_abs * masks.size
        if arec.dtype == object or bound >= _INT64_SAFE:
            arec, t = arec.astype(object), t.astype(object)
        tensors.append(np.tensordot(arec, t, axes=([1], [0])))
        dens.append(d ** r * table.den)
    logger.info("✅ %s frame products ready", rs.kind.label)
    return FrameProducts(tuple(tensors), tuple(dens))


def _check_invariants(invariants: Sequence[Multivector], perm: Permutation, kind: AlgebraKind) -> None:
    grades = blade_grades(DIMENSION)
    for r, inv in enumerate(invariants):
        if not inv.is_integral():
            raise KernelInvariantError(
                "non-integer SOCM coefficient", algebra=kind.label, permutation=perm, order=r, denominator=inv.den
            )
        present = grades[inv.support()]
        ceiling = min(2 * r, 2 * (DIMENSION - r))
        if np.any(present % 2 == 1) or np.any(present > ceiling):
            raise KernelInvariantError(
                "grade pattern violated", algebra=kind.label, permutation=perm, order=r, grades=sorted(set(present.tolist()))
            )
    for r in range(DIMENSION // 2):
        if invariants[r] != invariants[DIMENSION - r]:
            raise KernelInvariantError("mirror symmetry violated", algebra=kind.label, permutation=perm, order=r)
    if invariants[0] != Multivector.scalar(1, DIMENSION):
        raise KernelInvariantError("Inv_0 is not 1", algebra=kind.label, permutation=perm)


def socm_from_matrix(rs: RootSystem, m: np.ndarray, perm: Permutation) -> SOCM:
    """SOCM from the integer map matrix: Inv_r = Σ_{S,K} (b_S)_K reverse(a^S) a_K."""
    products = frame_products(rs.kind)
    chain = wedge_chain(np.asarray(m).T)
    invariants = []
    for r in range(rs.n + 1):
        masks = grade_masks(r, rs.n)
        compound = chain[np.ix_(masks, masks)]
        tensor = products.tensors[r]
        bound = int(np.abs(compound).max()) * int(np.abs(tensor).max()) * compound.size
        if bound >= _INT64_SAFE or compound.dtype == object or tensor.dtype == object:
            compound, tensor = compound.astype(object), tensor.astype(object)
        num = np.tensordot(compound, tensor, axes=([0, 1], [0, 1]))
        invariants.append(Multivector(num, products.dens[r], rs.n))
    _check_invariants(invariants, perm, rs.kind)
    return SOCM(tuple(invariants), perm, rs.kind)


def socm(rs: RootSystem, p: Sequence[int]) -> SOCM:
    perm = validate_permutation(p, rs.n)
    return socm_from_matrix(rs, reflection_product(rs, perm), perm)


def socm_by_versor(rs: RootSystem, p: Sequence[int]) -> SOCM:
    """Reference SOCM from the versor sandwich and per-subset geometric products."""
    W = coxeter_versor(rs, p)
    invariants = simplicial_derivatives(rs, W)
    _check_invariants(invariants, W.permutation, rs.kind)
    return SOCM(invariants, W.permutation, rs.kind)


def subinvariant(s: SOCM, r: int, k: int) -> Subinvariant:
    if not 0 <= r < ORDERS:
        raise GradeError(f"order {r} outside 0..{ORDERS - 1}")
    value = grade_project(s.invariants[r], k)
    masks = grade_masks(k, value.n)
    return Subinvariant(r, k, value, tuple(int(c) for c in value.integer_coefficients()[masks]))


# -- identities -----------------------------------------------------------------


def verify_char_poly_identity(s: SOCM, W: Versor, a: Multivector) -> bool:
    """Σ_s (-1)^(n-s) scalar(Inv_s) f^(n-s)(a) == 0 exactly."""
    require_grade(a, 1, "char-poly probe")
    n = len(s.invariants) - 1
    iterates = [a]
    for _ in range(n):
        iterates.append(apply_map(W, iterates[-1]))
    total = Multivector.zero(a.n)
    for order, inv in enumerate(s.invariants):
        c = scalar_part(inv) * (1 if (n - order) % 2 == 0 else -1)
        total = total + iterates[n - order].scale(c)
    return total.is_zero()


def verify_invariance(W: Versor, s: SOCM) -> bool:
    """Every grade part of every invariant is fixed by X -> W~ X W."""
    table = build_root_system(W.kind).table
    w_rev = reverse(W.value)
    for inv in s.invariants:
        for k in inv.grades():
            part = grade_project(inv, k)
            if gp(w_rev, gp(part, W.value, table), table) != part:
                return False
    return True


def is_unit_versor(W: Versor) -> bool:
    table = build_root_system(W.kind).table
    return gp(reverse(W.value), W.value, table) == Multivector.scalar(1, W.value.n)


def grade_pattern() -> Dict[int, Tuple[int, ...]]:
    """Allowed grades per order: even and at most min(2r, 2(n - r))."""
    return {
        r: tuple(k for k in EVEN_GRADES if k <= min(2 * r, 2 * (DIMENSION - r)))
        for r in range(ORDERS)
    }


def subinvariant_width(k: int) -> int:
    return comb(DIMENSION, k)
