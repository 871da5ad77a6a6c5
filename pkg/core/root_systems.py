# core/root_systems.py
"""Simple-root data for the eight-dimensional simply-laced root systems.

Roots are abstract unit vectors forming the frame itself; the metric is the
Gram matrix (Cartan matrix / 2). Nodes are 0-indexed: node i is α_{i+1}.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import factorial
from typing import Dict, List, Sequence, Tuple

import networkx as nx
import numpy as np

from core import exact
from core.exceptions import MetricError
from core.ga import DIMENSION, CayleyTable, Multivector, build_cayley_table
from schemas.algebra import AlgebraKind, Colour

logger = logging.getLogger(__name__)

_PATH = [(i, i + 1) for i in range(DIMENSION - 2)]

DYNKIN_EDGES: Dict[AlgebraKind, List[Tuple[int, int]]] = {
    AlgebraKind.A8: _PATH + [(6, 7)],
    AlgebraKind.D8: _PATH + [(5, 7)],
    AlgebraKind.E8: _PATH + [(4, 7)],
}

COXETER_NUMBERS: Dict[AlgebraKind, int] = {
    AlgebraKind.A8: 9,
    AlgebraKind.D8: 14,
    AlgebraKind.E8: 30,
}


# Twice the orthonormal coordinates of each simple root (so |row|² = 8).
_CHAIN = [[2 if k == i else -2 if k == i + 1 else 0 for k in range(DIMENSION)] for i in range(DIMENSION - 1)]

EUCLIDEAN_ROOTS: Dict[AlgebraKind, List[List[int]]] = {
    AlgebraKind.A8: _CHAIN + [[-1, -1, -1, -1, -1, -1, -1, 1]],
    AlgebraKind.D8: _CHAIN + [[0, 0, 0, 0, 0, 0, 2, 2]],
    # node 4 is the branch point; node 6 is the spinor-type root
    AlgebraKind.E8: [
        [0, 0, 0, 0, 0, -2, 2, 0],
        [0, 0, 0, 0, -2, 2, 0, 0],
        [0, 0, 0, -2, 2, 0, 0, 0],
        [0, 0, -2, 2, 0, 0, 0, 0],
        [0, -2, 2, 0, 0, 0, 0, 0],
        [-2, 2, 0, 0, 0, 0, 0, 0],
        [1, -1, -1, -1, -1, -1, -1, 1],
        [2, 2, 0, 0, 0, 0, 0, 0],
    ],
}

Permutation = Tuple[int, ...]


class RootSystem:
    def __init__(self, kind: AlgebraKind, edges: Sequence[Tuple[int, int]], coxeter_number: int):
        self.kind = kind
        self.n = DIMENSION
        self.edges = tuple(sorted(tuple(sorted(e)) for e in edges))
        adjacency = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in self.edges:
            adjacency[i, j] = adjacency[j, i] = 1
        adjacency.setflags(write=False)
        self.adjacency = adjacency
        self.coxeter_number = coxeter_number

        cartan = 2 * np.eye(self.n, dtype=np.int64) - adjacency
        cartan.setflags(write=False)
        self.cartan = cartan
        self.metric: Tuple[Tuple[Fraction, ...], ...] = tuple(
            tuple(Fraction(int(c), 2) for c in row) for row in cartan
        )

        graph = nx.from_numpy_array(adjacency)
        if not nx.is_tree(graph):
            raise MetricError(f"{kind.label} Dynkin diagram is not a tree", edges=self.edges)
        depth = nx.single_source_shortest_path_length(graph, 0)
        self.colouring: Tuple[Colour, ...] = tuple(
            Colour.WHITE if depth[i] % 2 == 0 else Colour.BLACK for i in range(self.n)
        )

    @cached_property
    def table(self) -> CayleyTable:
        logger.info("🔄 Building %s Cayley table", self.kind.label)
        return build_cayley_table(self.metric)

    @cached_property
    def gram_inverse(self) -> List[List[Fraction]]:
        return exact.inverse(self.metric)

    @cached_property
    def frame(self) -> Tuple[Multivector, ...]:
        return tuple(Multivector.blade(1 << i, 1, self.n) for i in range(self.n))

    @cached_property
    def reciprocal(self) -> Tuple[Multivector, ...]:
        return reciprocal_frame(self)

    @cached_property
    def euclidean(self) -> np.ndarray:
        """Doubled orthonormal coordinates of the simple roots, one row per node."""
        roots = np.array(EUCLIDEAN_ROOTS[self.kind], dtype=np.int64)
        if not np.array_equal(roots @ roots.T, 4 * self.cartan):
            raise MetricError(f"{self.kind.label} embedding does not reproduce the Cartan matrix")
        roots.setflags(write=False)
        return roots

    def bilinear(self, x: Sequence, y: Sequence) -> Fraction:
        """B(x, y) for frame coordinate vectors."""
        return sum(
            (Fraction(x[i]) * self.metric[i][j] * Fraction(y[j]) for i in range(self.n) for j in range(self.n)),
            Fraction(0),
        )

    def reflection_matrix(self, i: int) -> np.ndarray:
        """Integer matrix of x -> x - 2 B(x, a_i) a_i on frame coordinates."""
        s = np.eye(self.n, dtype=np.int64)
        s[i, :] -= self.cartan[i, :]
        return s

    def __repr__(self) -> str:
        return f"RootSystem({self.kind.label}, h={self.coxeter_number})"


def build_root_system(kind: AlgebraKind) -> RootSystem:
    """Shared, lazily completed root system for A8, D8 or E8."""
    return _root_system(AlgebraKind(kind))


@lru_cache(maxsize=None)
def _root_system(kind: AlgebraKind) -> RootSystem:
    return RootSystem(kind, DYNKIN_EDGES[kind], COXETER_NUMBERS[kind])


def reciprocal_frame(rs: RootSystem) -> Tuple[Multivector, ...]:
    """a^i = Σ_j (G^{-1})_{ij} a_j, so that a^i · a_j = δ^i_j."""
    inv = rs.gram_inverse
    return tuple(Multivector.vector(inv[i], rs.n) for i in range(rs.n))


# -- permutations -------------------------------------------------------------


def validate_permutation(p: Sequence[int], n: int = DIMENSION) -> Permutation:
    perm = tuple(int(x) for x in p)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{list(p)} is not a permutation of 0..{n - 1}")
    return perm


def invert_permutation(p: Sequence[int]) -> Permutation:
    """Positional reversal of the ordering (not the group inverse)."""
    return tuple(int(x) for x in reversed(p))


@lru_cache(maxsize=None)
def all_permutations(n: int = DIMENSION) -> np.ndarray:
    """Every permutation of 0..n-1, row index = lexicographic rank."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int8)
    perms.setflags(write=False)
    return perms


def permutation_rank(p: Sequence[int]) -> int:
    """Lexicographic rank via the Lehmer code."""
    perm = list(p)
    n = len(perm)
    rank = 0
    for i, x in enumerate(perm):
        smaller = sum(1 for y in perm[i + 1:] if y < x)
        rank += smaller * factorial(n - 1 - i)
    return rank


def permutation_ranks(perms: np.ndarray) -> np.ndarray:
    """Vectorised lexicographic ranks of a batch of permutations."""
    perms = np.asarray(perms, dtype=np.int64)
    n = perms.shape[1]
    ranks = np.zeros(perms.shape[0], dtype=np.int64)
    for i in range(n - 1):
        smaller = (perms[:, i + 1:] < perms[:, i:i + 1]).sum(axis=1)
        ranks += smaller * factorial(n - 1 - i)
    return ranks


def permutation_from_rank(rank: int, n: int = DIMENSION) -> Permutation:
    if not 0 <= rank < factorial(n):
        raise ValueError(f"rank {rank} out of range for n={n}")
    pool = list(range(n))
    out = []
    for i in range(n - 1, -1, -1):
        idx, rank = divmod(rank, factorial(i))
        out.append(pool.pop(idx))
    return tuple(out)


# -- barcodes -----------------------------------------------------------------


@dataclass(frozen=True)
class Barcode:
    colours: Tuple[Colour, ...]

    def __str__(self) -> str:
        return "".join(c.value for c in self.colours)

    def flip(self) -> "Barcode":
        return Barcode(tuple(c.flipped() for c in self.colours))

    @property
    def bits(self) -> int:
        """Bit p set iff position p is black."""
        return sum(1 << p for p, c in enumerate(self.colours) if c is Colour.BLACK)

    @property
    def changes(self) -> int:
        return sum(1 for a, b in zip(self.colours, self.colours[1:]) if a is not b)


def barcode(rs: RootSystem, p: Sequence[int]) -> Barcode:
    return Barcode(tuple(rs.colouring[int(i)] for i in p))


def is_bipartite(rs: RootSystem, p: Sequence[int]) -> bool:
    """All roots of one colour come before all roots of the other."""
    return barcode(rs, p).changes == 1


def barcode_bits(rs: RootSystem, perms: np.ndarray) -> np.ndarray:
    """Barcode bit patterns for a batch of permutations."""
    black = np.array([c is Colour.BLACK for c in rs.colouring], dtype=np.int64)
    weights = 1 << np.arange(perms.shape[1], dtype=np.int64)
    return (black[np.asarray(perms, dtype=np.int64)] * weights).sum(axis=1)
