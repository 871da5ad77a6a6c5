# core/ga.py
"""Exact Clifford algebra kernel over a rational, possibly non-orthonormal frame.

Multivectors are dense coefficient arrays over the 2**n basis blades, indexed
by bit mask (bit i set means frame vector a_{i+1} takes part, ascending order).
Coefficients are stored as an integer numerator array over one positive common
denominator, kept in lowest terms. Products go through a sparse Cayley table
built once per metric.
"""
import logging
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from core.exceptions import GradeError, MetricError

logger = logging.getLogger(__name__)

DIMENSION = 8

Scalar = Union[int, Fraction]

# int64 products are only taken when the worst-case accumulated magnitude stays
# below this bound; anything larger goes through Python integers.
_INT64_SAFE = 1 << 62


def _bits(mask: int) -> List[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


@lru_cache(maxsize=None)
def blade_grades(n: int = DIMENSION) -> np.ndarray:
    """Grade (popcount) of every basis blade mask."""
    grades = np.array([bin(m).count("1") for m in range(1 << n)], dtype=np.int64)
    grades.setflags(write=False)
    return grades


@lru_cache(maxsize=None)
def grade_masks(k: int, n: int = DIMENSION) -> np.ndarray:
    """Ascending masks of grade k."""
    masks = np.flatnonzero(blade_grades(n) == k)
    masks.setflags(write=False)
    return masks


@lru_cache(maxsize=None)
def reverse_signs(n: int = DIMENSION) -> np.ndarray:
    g = blade_grades(n)
    signs = np.where((g * (g - 1) // 2) % 2 == 0, 1, -1).astype(np.int64)
    signs.setflags(write=False)
    return signs


def _absmax(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int(np.abs(arr).max())


def _as_integer_array(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype == object:
        if arr.size == 0 or _absmax(arr) < _INT64_SAFE:
            return arr.astype(np.int64)
        return arr
    if not np.issubdtype(arr.dtype, np.integer):
        raise TypeError(f"multivector numerators must be integers, got {arr.dtype}")
    return arr.astype(np.int64)


def _array_gcd(arr: np.ndarray) -> int:
    if arr.dtype == object:
        return reduce(gcd, (int(v) for v in arr), 0)
    return int(np.gcd.reduce(arr)) if arr.size else 0


def _scaled(arr: np.ndarray, factor: int) -> np.ndarray:
    if factor == 1:
        return arr
    if arr.dtype != object and _absmax(arr) * abs(factor) < _INT64_SAFE:
        return arr * factor
    return arr.astype(object) * factor


class Multivector:
    """Immutable exact element of the Clifford algebra on an n-dimensional frame."""

    __slots__ = ("num", "den", "n")

    def __init__(self, num, den: int = 1, n: Optional[int] = None):
        num = _as_integer_array(num)
        if num.ndim != 1:
            raise ValueError("multivector numerators must be one-dimensional")
        if n is None:
            n = num.size.bit_length() - 1
        if num.size != 1 << n:
            raise ValueError(f"expected {1 << n} coefficients, got {num.size}")
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("multivector denominator is zero")
        if den < 0:
            num, den = -num, -den
        g = gcd(_array_gcd(num), den)
        if g > 1:
            num = num // g
            den //= g
        num.setflags(write=False)
        self.num = num
        self.den = den
        self.n = n

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, n: int = DIMENSION) -> "Multivector":
        return cls(np.zeros(1 << n, dtype=np.int64), 1, n)

    @classmethod
    def scalar(cls, value: Scalar, n: int = DIMENSION) -> "Multivector":
        return cls.from_terms({0: value}, n)

    @classmethod
    def blade(cls, mask: int, coeff: Scalar = 1, n: int = DIMENSION) -> "Multivector":
        if not 0 <= mask < 1 << n:
            raise ValueError(f"blade mask {mask} out of range for n={n}")
        return cls.from_terms({mask: coeff}, n)

    @classmethod
    def vector(cls, coeffs: Sequence[Scalar], n: Optional[int] = None) -> "Multivector":
        n = len(coeffs) if n is None else n
        if len(coeffs) != n:
            raise ValueError(f"expected {n} vector coefficients, got {len(coeffs)}")
        return cls.from_terms({1 << i: c for i, c in enumerate(coeffs)}, n)

    @classmethod
    def from_terms(cls, terms: Dict[int, Scalar], n: int = DIMENSION) -> "Multivector":
        fracs = {int(m): Fraction(c) for m, c in terms.items() if c != 0}
        den = reduce(lcm, (f.denominator for f in fracs.values()), 1)
        num = np.zeros(1 << n, dtype=object)
        for m, f in fracs.items():
            num[m] = f.numerator * (den // f.denominator)
        return cls(num, den, n)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[Scalar]) -> "Multivector":
        n = len(coeffs).bit_length() - 1
        return cls.from_terms(dict(enumerate(coeffs)), n)

    # -- accessors --------------------------------------------------------

    @property
    def size(self) -> int:
        return 1 << self.n

    def coefficient(self, mask: int) -> Fraction:
        return Fraction(int(self.num[mask]), self.den)

    def coefficients(self) -> List[Fraction]:
        return [Fraction(int(v), self.den) for v in self.num]

    def integer_coefficients(self) -> np.ndarray:
        if self.den != 1:
            raise ValueError(f"multivector has denominator {self.den}")
        return self.num

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.num)

    def grades(self) -> List[int]:
        return sorted({int(g) for g in blade_grades(self.n)[self.support()]})

    def is_zero(self) -> bool:
        return not np.any(self.num)

    def is_integral(self) -> bool:
        return self.den == 1

    def to_float(self) -> np.ndarray:
        return np.array([float(Fraction(int(v), self.den)) for v in self.num])

    # -- arithmetic -------------------------------------------------------

    def _aligned(self, other: "Multivector") -> Tuple[np.ndarray, np.ndarray, int]:
        if not isinstance(other, Multivector):
            raise TypeError(f"cannot combine Multivector with {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        den = lcm(self.den, other.den)
        a = _scaled(self.num, den // self.den)
        b = _scaled(other.num, den // other.den)
        if a.dtype != object and b.dtype != object and _absmax(a) + _absmax(b) >= _INT64_SAFE:
            a, b = a.astype(object), b.astype(object)
        return a, b, den

    def __add__(self, other: "Multivector") -> "Multivector":
        a, b, den = self._aligned(other)
        return Multivector(a + b, den, self.n)

    def __sub__(self, other: "Multivector") -> "Multivector":
        a, b, den = self._aligned(other)
        return Multivector(a - b, den, self.n)

    def __neg__(self) -> "Multivector":
        return Multivector(-self.num, self.den, self.n)

    def scale(self, factor: Scalar) -> "Multivector":
        f = Fraction(factor)
        return Multivector(_scaled(self.num, f.numerator), self.den * f.denominator, self.n)

    def __mul__(self, factor: Scalar) -> "Multivector":
        if isinstance(factor, Multivector):
            raise TypeError("use gp(A, B, table) for the geometric product")
        return self.scale(factor)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.n == other.n and self.den == other.den and np.array_equal(self.num, other.num)

    def __hash__(self) -> int:
        return hash((self.n, self.den, tuple(int(v) for v in self.num)))

    def __repr__(self) -> str:
        terms = []
        for m in self.support():
            c = self.coefficient(int(m))
            label = "".join(f"a{i + 1}" for i in _bits(int(m))) or "1"
            terms.append(f"{c}*{label}")
        return "Multivector(" + (" + ".join(terms) or "0") + ")"


# -- Cayley table -----------------------------------------------------------


def _as_fraction_matrix(metric) -> Tuple[Tuple[Fraction, ...], ...]:
    if isinstance(metric, np.ndarray):
        metric = metric.tolist()
    rows = tuple(tuple(Fraction(x) for x in row) for row in metric)
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise MetricError("metric must be a non-empty square matrix", shape=(n, [len(r) for r in rows]))
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise MetricError("metric is not symmetric", entry=(i, j))
    return rows


class CayleyTable:
    """Geometric products of every ordered pair of basis blades.

    Row ``i * 2**n + j`` of ``matrix`` holds the numerators of ``e_i e_j``
    over the common denominator ``den``.
    """

    def __init__(self, metric: Tuple[Tuple[Fraction, ...], ...], matrix: sparse.csr_matrix, den: int):
        self.metric = metric
        self.n = len(metric)
        self.size = 1 << self.n
        self.matrix = matrix
        self.den = den
        self.max_abs = _absmax(matrix.data)

    def entry(self, i: int, j: int) -> Multivector:
        row = self.matrix[i * self.size + j].toarray().ravel()
        return Multivector(row, self.den, self.n)

    def bilinear(self, i: int, j: int) -> Fraction:
        return self.metric[i][j]


def _vector_left_operator(i: int, bint: Sequence[Sequence[int]], scale: int, n: int) -> sparse.csr_matrix:
    """Left multiplication by a_i (contraction plus wedge), scaled by ``scale``."""
    size = 1 << n
    rows: List[int] = []
    cols: List[int] = []
    vals: List[int] = []
    below_mask = (1 << i) - 1
    for m in range(size):
        for pos, j in enumerate(_bits(m)):
            c = bint[i][j]
            if c:
                rows.append(m ^ (1 << j))
                cols.append(m)
                vals.append(c if pos % 2 == 0 else -c)
        if not m >> i & 1:
            below = bin(m & below_mask).count("1")
            rows.append(m | 1 << i)
            cols.append(m)
            vals.append(scale if below % 2 == 0 else -scale)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(size, size), dtype=np.int64)


def build_cayley_table(metric) -> CayleyTable:
    """Build the blade product table for a symmetric rational bilinear form.

    Left multiplication by a blade e_I is assembled from left multiplication
    by vectors: e_I M = a_{i1} (e_{I'} M) - (a_{i1} ⌋ e_{I'}) M, with i1 the
    smallest index of I. Operators are carried as integer matrices at scale
    D**grade, D the lcm of the metric denominators.
    """
    bilinear = _as_fraction_matrix(metric)
    n = len(bilinear)
    size = 1 << n
    scale = reduce(lcm, (x.denominator for row in bilinear for x in row), 1)
    bint = [[int(x * scale) for x in row] for row in bilinear]

    vec_ops = [_vector_left_operator(i, bint, scale, n) for i in range(n)]
    left: List[Optional[sparse.csr_matrix]] = [None] * size
    left[0] = sparse.identity(size, dtype=np.int64, format="csr")
    for mask in range(1, size):
        i1 = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        acc = vec_ops[i1] @ left[rest]
        for pos, j in enumerate(_bits(rest)):
            c = bint[i1][j]
            if c:
                sign = 1 if pos % 2 == 0 else -1
                acc = acc - left[rest ^ (1 << j)] * (scale * sign * c)
        acc = acc.tocsr()
        acc.eliminate_zeros()
        left[mask] = acc

    grades = blade_grades(n)
    den = scale ** n
    blocks = [(left[m] * (scale ** (n - int(grades[m])))).T.tocsr() for m in range(size)]
    matrix = sparse.vstack(blocks, format="csr").astype(np.int64)
    matrix.eliminate_zeros()
    table = CayleyTable(bilinear, matrix, den)
    logger.debug("Cayley table for n=%d built: %d non-zero entries, denominator %d", n, matrix.nnz, den)
    return table


@lru_cache(maxsize=None)
def exterior_table(n: int = DIMENSION) -> CayleyTable:
    """Cayley table of the zero metric, i.e. the outer product."""
    return build_cayley_table([[0] * n for _ in range(n)])


# -- products and projections -----------------------------------------------


def gp(A: Multivector, B: Multivector, table: CayleyTable) -> Multivector:
    """Geometric product, the bilinear extension of the Cayley table."""
    if A.n != table.n or B.n != table.n:
        raise ValueError(f"operands of dimension {A.n}/{B.n} do not match table dimension {table.n}")
    ia = A.support()
    jb = B.support()
    den = A.den * B.den * table.den
    if ia.size == 0 or jb.size == 0:
        return Multivector.zero(table.n)
    rows = (ia[:, None] * table.size + jb[None, :]).ravel()
    a = A.num[ia]
    b = B.num[jb]
    sub = table.matrix[rows]
    bound = _absmax(a) * _absmax(b) * table.max_abs * rows.size
    if a.dtype != object and b.dtype != object and bound < _INT64_SAFE:
        weights = np.multiply.outer(a, b).ravel()
        num = np.asarray(sub.T @ weights, dtype=np.int64).ravel()
    else:
        coo = sub.tocoo()
        weights = np.multiply.outer(a.astype(object), b.astype(object)).ravel()
        num = np.zeros(table.size, dtype=object)
        np.add.at(num, coo.col, coo.data.astype(object) * weights[coo.row])
    return Multivector(num, den, table.n)


def wedge(A: Multivector, B: Multivector) -> Multivector:
    if A.n != B.n:
        raise ValueError(f"dimension mismatch: {A.n} vs {B.n}")
    return gp(A, B, exterior_table(A.n))


def reverse(A: Multivector) -> Multivector:
    return Multivector(A.num * reverse_signs(A.n), A.den, A.n)


def grade_project(A: Multivector, k: int) -> Multivector:
    if not 0 <= k <= A.n:
        raise GradeError(f"grade {k} outside 0..{A.n}")
    keep = blade_grades(A.n) == k
    return Multivector(np.where(keep, A.num, 0), A.den, A.n)


def scalar_part(A: Multivector) -> Fraction:
    return Fraction(int(A.num[0]), A.den)


def left_contraction(A: Multivector, B: Multivector, table: CayleyTable) -> Multivector:
    """A ⌋ B as the sum of grade-(s - r) parts of products of grade parts."""
    out = Multivector.zero(table.n)
    for r in A.grades():
        ar = grade_project(A, r)
        for s in B.grades():
            if s >= r:
                out = out + grade_project(gp(ar, grade_project(B, s), table), s - r)
    return out


def is_grade(A: Multivector, k: int) -> bool:
    return all(g == k for g in A.grades())


def require_grade(A: Multivector, k: int, what: str = "operand") -> None:
    if not is_grade(A, k):
        raise GradeError(f"{what} must be grade {k}", grades=A.grades())


def wedge_all(vectors: Iterable[Multivector], n: int = DIMENSION) -> Multivector:
    return reduce(wedge, vectors, Multivector.scalar(1, n))


def wedge_chain(vectors: np.ndarray) -> np.ndarray:
    """Ascending wedges of every subset of integer vectors.

    ``vectors`` is (n, n), row j holding the frame coefficients of the j-th
    vector. Row S of the result holds the blade coefficients of the wedge of
    the vectors indexed by the bits of S, taken in ascending order.
    """
    vectors = np.asarray(vectors)
    n = vectors.shape[0]
    size = 1 << n
    src, vec, tgt, sign = _extension_pairs(n)
    grades = blade_grades(n)
    dtype = object if vectors.dtype == object else np.int64
    out = np.zeros((size, size), dtype=dtype)
    out[0, 0] = 1
    for r in range(1, n + 1):
        subsets = grade_masks(r, n)
        tops = np.array([int(s).bit_length() - 1 for s in subsets])
        parents = out[subsets ^ (1 << tops)]
        keep = grades[src] == r - 1
        s_src, s_vec, s_tgt, s_sign = src[keep], vec[keep], tgt[keep], sign[keep]
        contrib = parents[:, s_src] * vectors[tops][:, s_vec] * s_sign
        block = np.zeros((subsets.size, size), dtype=dtype)
        np.add.at(block, (np.arange(subsets.size)[:, None], s_tgt[None, :]), contrib)
        out[subsets] = block
    return out


@lru_cache(maxsize=None)
def _extension_pairs(n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(mask, i) pairs with i not in mask: target mask and wedge sign of e_mask ∧ a_i."""
    src, vec, tgt, sign = [], [], [], []
    for m in range(1 << n):
        for i in range(n):
            if m >> i & 1:
                continue
            above = bin(m >> (i + 1)).count("1")
            src.append(m)
            vec.append(i)
            tgt.append(m | 1 << i)
            sign.append(-1 if above % 2 else 1)
    arrays = tuple(np.array(a, dtype=np.int64) for a in (src, vec, tgt, sign))
    for a in arrays:
        a.setflags(write=False)
    return arrays
