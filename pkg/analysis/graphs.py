# analysis/graphs.py
"""Bivector subinvariants read as undirected graphs on the eight simple roots.

Edge (i, j) is present iff the coefficient of a_i ∧ a_j is non-zero. Spectra
are those of the symmetric 0/1 adjacency matrix.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from analysis.frequency import reduce_to_classes
from core.config import settings
from core.coxeter import ORDERS, Subinvariant
from core.dataset import Dataset
from core.exceptions import GradeError, GraphError
from core.ga import DIMENSION
from core.root_systems import all_permutations, build_root_system
from schemas.algebra import AlgebraKind
from schemas.graphs import (
    BaselineSummary,
    GraphCensus,
    HistogramBin,
    RepeatCounts,
    SmithCheck,
    SpectrumStats,
)

logger = logging.getLogger(__name__)

PAIRS: Tuple[Tuple[int, int], ...] = tuple(itertools.combinations(range(DIMENSION), 2))
PAIR_MASKS = np.array([(1 << i) | (1 << j) for i, j in PAIRS], dtype=np.int64)
EDGE_SLOTS = len(PAIRS)
CENSUS_ORDERS = (1, 2, 3, 4)
NONTRIVIAL_ORDERS = tuple(range(1, ORDERS - 1))


@dataclass(frozen=True)
class BivectorGraph:
    coefficients: Tuple[int, ...]
    source: Optional[Tuple[str, int, int]] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.coefficients) != EDGE_SLOTS:
            raise GraphError(f"bivector graph needs {EDGE_SLOTS} coefficients", got=len(self.coefficients))

    @property
    def bits(self) -> np.ndarray:
        return (np.asarray(self.coefficients) != 0).astype(np.int64)

    @property
    def adjacency(self) -> np.ndarray:
        return adjacency_from_bits(self.bits[None, :])[0]

    @property
    def is_empty(self) -> bool:
        return not any(self.coefficients)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(DIMENSION))
        g.add_edges_from(pair for pair, c in zip(PAIRS, self.coefficients) if c)
        return g


def graph_from_adjacency(adjacency: np.ndarray) -> BivectorGraph:
    adjacency = np.asarray(adjacency)
    return BivectorGraph(tuple(int(adjacency[i, j] != 0) for i, j in PAIRS))


def to_graph(sub: Subinvariant, source: Optional[Tuple[str, int, int]] = None) -> BivectorGraph:
    if sub.grade != 2:
        raise GradeError("only bivector subinvariants define graphs", grade=sub.grade)
    coeffs = sub.value.integer_coefficients()[PAIR_MASKS]
    return BivectorGraph(tuple(int(c) for c in coeffs), source)


def bivector_coefficients(d: Dataset, r: int) -> np.ndarray:
    """(rows, 28) bivector coefficients of Inv_r, pairs in lexicographic order."""
    return d.order_block(r)[:, PAIR_MASKS].astype(np.int64)


def adjacency_from_bits(bits: np.ndarray) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.int64)
    adj = np.zeros((bits.shape[0], DIMENSION, DIMENSION), dtype=np.int64)
    rows, cols = np.array(PAIRS).T
    adj[:, rows, cols] = bits
    adj[:, cols, rows] = bits
    return adj


def connected_mask(adjs: np.ndarray) -> np.ndarray:
    """True for graphs whose eight nodes form one component."""
    reach = (np.asarray(adjs) + np.eye(DIMENSION, dtype=np.int64) > 0).astype(np.int64)
    for _ in range(3):
        reach = (reach @ reach > 0).astype(np.int64)
    return reach.all(axis=(1, 2))


# -- spectra --------------------------------------------------------------------


def max_eigenvalues(adjs: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(np.asarray(adjs, dtype=np.float64))[:, -1]


def max_eigenvalue(g: BivectorGraph) -> float:
    """Perron root of the adjacency; 0.0 for the empty graph (check ``g.is_empty``)."""
    if g.is_empty:
        return 0.0
    return float(max_eigenvalues(g.adjacency[None])[0])


def _most_central(scores: np.ndarray) -> np.ndarray:
    """Smallest index attaining the maximum, per row."""
    top = scores.max(axis=1, keepdims=True)
    return np.argmax(scores >= top - 1e-12, axis=1)


def centralities(adjs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Perron eigenvalues and unit-norm non-negative Perron vectors of connected graphs."""
    values, vectors = np.linalg.eigh(np.asarray(adjs, dtype=np.float64))
    perron = vectors[:, :, -1]
    perron = perron * np.where(perron.sum(axis=1) < 0, -1.0, 1.0)[:, None]
    perron = np.abs(perron) / np.linalg.norm(perron, axis=1, keepdims=True)
    return values[:, -1], perron


def eigenvector_centrality(g: BivectorGraph) -> SpectrumStats:
    if g.is_empty or not nx.is_connected(g.to_networkx()):
        raise GraphError("eigenvector centrality needs a connected non-empty graph", source=g.source)
    values, vectors = centralities(g.adjacency[None])
    vector = vectors[0]
    return SpectrumStats(
        max_eigenvalue=float(values[0]),
        centrality=vector.tolist(),
        most_central_index=int(_most_central(vector[None])[0]) + 1,
        centrality_variance=float(np.var(vector)),
    )


# -- canonical labelling -------------------------------------------------------


@lru_cache(maxsize=None)
def _relabel_weights() -> np.ndarray:
    """(28, 8!) matrix Q with bits @ Q = bitstring value of every relabelled graph.

    Under relabelling π the new pair t = (k, l) reads old pair (π_k, π_l); the
    first pair is the most significant bit.
    """
    perms = all_permutations(DIMENSION).astype(np.int64)
    index = np.full((DIMENSION, DIMENSION), -1, dtype=np.int64)
    for t, (i, j) in enumerate(PAIRS):
        index[i, j] = index[j, i] = t
    ks, ls = np.array(PAIRS).T
    source = index[perms[:, ks], perms[:, ls]]
    weights = 1 << np.arange(EDGE_SLOTS - 1, -1, -1, dtype=np.int64)
    q = np.zeros((EDGE_SLOTS, perms.shape[0]), dtype=np.int64)
    q[source, np.arange(perms.shape[0])[:, None]] = weights[None, :]
    q.setflags(write=False)
    return q


def canonical_codes(bits: np.ndarray, batch: int = 64) -> np.ndarray:
    """Minimal relabelled bitstring value per graph; equal codes iff isomorphic."""
    bits = np.asarray(bits, dtype=np.int64)
    if bits.size == 0:
        return np.zeros(0, dtype=np.int64)
    unique, inverse = np.unique(bits, axis=0, return_inverse=True)
    q = _relabel_weights()
    codes = np.empty(unique.shape[0], dtype=np.int64)
    for lo in range(0, unique.shape[0], batch):
        codes[lo:lo + batch] = (unique[lo:lo + batch] @ q).min(axis=1)
    return codes[np.asarray(inverse).ravel()]


def canonical_form(g: BivectorGraph) -> str:
    return format(int(canonical_codes(g.bits[None])[0]), f"0{EDGE_SLOTS}b")


# -- census ---------------------------------------------------------------------


def distinct_values(values: np.ndarray, tol: Optional[float] = None) -> int:
    """Count of values after merging neighbours closer than ``tol``."""
    tol = settings.socm_eigen_tol if tol is None else tol
    values = np.sort(np.asarray(values, dtype=np.float64))
    if values.size == 0:
        return 0
    return int(1 + np.count_nonzero(np.diff(values) > tol))


def _distinct_rows(block: np.ndarray) -> np.ndarray:
    if block.ndim == 1:
        return np.unique(block)
    return np.unique(block, axis=0)


def _excess(blocks: Sequence[np.ndarray]) -> int:
    """How many per-block distinct objects disappear when the blocks are merged."""
    per_block = sum(_distinct_rows(b).shape[0] for b in blocks)
    return per_block - _distinct_rows(np.concatenate(blocks)).shape[0]


def _nonzero(block: np.ndarray) -> np.ndarray:
    return block[np.any(block != 0, axis=1)]


def distinct_counts(d: Dataset) -> Tuple[int, int, int, RepeatCounts]:
    """Distinct bivector subinvariants, adjacencies and isomorphism classes over all orders."""
    reduced = reduce_to_classes(d)
    blocks = [bivector_coefficients(reduced, r) for r in range(ORDERS)]
    everything = np.concatenate(blocks)
    adjacency = (everything != 0).astype(np.int64)
    subs = _distinct_rows(everything).shape[0]
    adjs = _distinct_rows(adjacency).shape[0]
    isos = np.unique(canonical_codes(adjacency)).size

    census_blocks = [_nonzero(blocks[r]) for r in CENSUS_ORDERS]
    census_bits = [(b != 0).astype(np.int64) for b in census_blocks]
    repeats = RepeatCounts(
        subinvariants=_excess(census_blocks),
        adjacencies=_excess(census_bits),
        graphs=_excess([canonical_codes(b) for b in census_bits]),
    )
    return subs, adjs, isos, repeats


@dataclass
class EigenvalueCensus:
    counts: List[int]
    iso_counts: List[int]
    histogram: List[HistogramBin]


def histogram(values: np.ndarray, bins: int, value_range: Tuple[float, float], **labels) -> List[HistogramBin]:
    counts, edges = np.histogram(values, bins=bins, range=value_range)
    return [
        HistogramBin(bin_left=float(edges[i]), bin_right=float(edges[i + 1]), count=int(c), **labels)
        for i, c in enumerate(counts)
    ]


def _spectra_by_order(d: Dataset, orders: Iterable[int]) -> Dict[int, Tuple[np.ndarray, np.ndarray]]:
    """Per order: adjacency bits of the non-empty graphs and their Perron roots."""
    out = {}
    for r in orders:
        bits = _nonzero((bivector_coefficients(d, r) != 0).astype(np.int64))
        unique, inverse = np.unique(bits, axis=0, return_inverse=True)
        values = max_eigenvalues(adjacency_from_bits(unique))
        out[r] = (bits, values[np.asarray(inverse).ravel()])
    return out


def eigenvalue_census(d: Dataset, bins: int = 70) -> EigenvalueCensus:
    """Distinct maximum eigenvalues per order 1..4, plus histograms over orders 1..7."""
    spectra = _spectra_by_order(d, NONTRIVIAL_ORDERS)
    counts = [distinct_values(spectra[r][1]) for r in CENSUS_ORDERS]
    iso_counts = [int(np.unique(canonical_codes(np.unique(spectra[r][0], axis=0))).size) for r in CENSUS_ORDERS]
    bars: List[HistogramBin] = []
    for r in NONTRIVIAL_ORDERS:
        bars.extend(histogram(spectra[r][1], bins, (0.0, 7.0), order=r, algebra=d.algebra.value))
    return EigenvalueCensus(counts, iso_counts, bars)


def smith_check(d: Dataset) -> SmithCheck:
    """Graphs with Perron root below 2 must all be the algebra's own Dynkin diagram."""
    rs = build_root_system(d.algebra)
    dynkin = canonical_codes(graph_from_adjacency(rs.adjacency).bits[None])[0]
    below_codes: List[np.ndarray] = []
    orders: List[int] = []
    for r, (bits, values) in _spectra_by_order(reduce_to_classes(d), NONTRIVIAL_ORDERS).items():
        small = bits[values < 2.0 - settings.socm_eigen_tol]
        if small.size:
            orders.append(r)
            below_codes.append(canonical_codes(small))
    codes = np.concatenate(below_codes) if below_codes else np.zeros(0, dtype=np.int64)
    return SmithCheck(
        dynkin_found=bool(np.any(codes == dynkin)),
        dynkin_orders=orders,
        only_dynkin_below_two=bool(np.all(codes == dynkin)),
        below_two=int(codes.size),
    )


def graph_census(d: Dataset, eigen: Optional[EigenvalueCensus] = None) -> GraphCensus:
    reduced = reduce_to_classes(d)
    subs, adjs, isos, repeats = distinct_counts(reduced)
    eigen = eigen or eigenvalue_census(reduced)
    bits = np.concatenate([_nonzero((bivector_coefficients(reduced, r) != 0).astype(np.int64)) for r in NONTRIVIAL_ORDERS])
    census = GraphCensus(
        algebra=d.algebra,
        distinct_subinvariants=subs,
        distinct_adjacencies=adjs,
        iso_classes=isos,
        repeats=repeats,
        all_connected=bool(connected_mask(adjacency_from_bits(bits)).all()),
        eigenvalue_counts=eigen.counts,
        iso_counts=eigen.iso_counts,
        eigenvalues_match_iso_classes=[c == i for c, i in zip(eigen.counts, eigen.iso_counts)],
        smith=smith_check(reduced),
    )
    logger.info(
        "✅ %s graphs: %d subinvariants, %d adjacencies, %d iso classes, eigenvalues %s",
        d.algebra.label, subs, adjs, isos, eigen.counts,
    )
    if not census.all_connected:
        logger.warning("⚠️ %s has disconnected non-empty bivector graphs", d.algebra.label)
    return census


def shared_subinvariants(datasets: Dict[AlgebraKind, Dataset]) -> Dict[str, int]:
    """Non-zero bivector subinvariants common to each pair of algebras."""
    sets = {}
    for kind, d in datasets.items():
        reduced = reduce_to_classes(d)
        rows = np.concatenate([_nonzero(bivector_coefficients(reduced, r)) for r in NONTRIVIAL_ORDERS])
        sets[AlgebraKind(kind)] = {tuple(row) for row in rows.tolist()}
    return {
        f"{a.value}-{b.value}": len(sets[a] & sets[b])
        for a, b in itertools.combinations(sorted(sets, key=lambda k: k.value), 2)
    }


# -- centrality figures ---------------------------------------------------------


def centrality_histograms(d: Dataset, bins: int = 50) -> Tuple[List[HistogramBin], List[HistogramBin]]:
    """Most-central-node counts (nodes 1..8) and centrality-variance histograms per order."""
    nodes: List[HistogramBin] = []
    variances: List[HistogramBin] = []
    for r in NONTRIVIAL_ORDERS:
        bits = _nonzero((bivector_coefficients(d, r) != 0).astype(np.int64))
        unique, inverse = np.unique(bits, axis=0, return_inverse=True)
        adjs = adjacency_from_bits(unique)
        if not connected_mask(adjs).all():
            raise GraphError("disconnected bivector graph", algebra=d.algebra.label, order=r)
        _, scores = centralities(adjs)
        inverse = np.asarray(inverse).ravel()
        central = _most_central(scores)[inverse]
        spread = np.var(scores, axis=1)[inverse]
        counts = np.bincount(central, minlength=DIMENSION)
        nodes.extend(
            HistogramBin(bin_left=k + 0.5, bin_right=k + 1.5, count=int(c), order=r, algebra=d.algebra.value)
            for k, c in enumerate(counts)
        )
        variances.extend(histogram(spread, bins, (0.0, 1.0 / DIMENSION), order=r, algebra=d.algebra.value))
    return nodes, variances


# -- random baseline ------------------------------------------------------------


def random_connected_baseline(n: int, seed: Optional[int] = None, batch: int = 65536) -> Tuple[np.ndarray, BaselineSummary]:
    """Perron roots of ``n`` random connected 8-node graphs with fair-coin edges."""
    if n <= 0:
        raise GraphError("baseline needs a positive sample count", n=n)
    seed = settings.socm_seed if seed is None else seed
    rng = np.random.default_rng(seed)
    accepted: List[np.ndarray] = []
    total = 0
    while total < n:
        bits = rng.integers(0, 2, size=(batch, EDGE_SLOTS), dtype=np.int64)
        bits = bits[connected_mask(adjacency_from_bits(bits))]
        accepted.append(bits)
        total += bits.shape[0]
    bits = np.concatenate(accepted)[:n]
    unique, inverse = np.unique(bits, axis=0, return_inverse=True)
    values = max_eigenvalues(adjacency_from_bits(unique))[np.asarray(inverse).ravel()]
    summary = BaselineSummary(
        samples=n,
        seed=seed,
        unique_matrices=int(unique.shape[0]),
        distinct_eigenvalues=distinct_values(values),
        min_eigenvalue=float(values.min()),
        max_eigenvalue=float(values.max()),
    )
    logger.info("✅ Random baseline: %d graphs, %d unique, %d distinct eigenvalues", n, summary.unique_matrices, summary.distinct_eigenvalues)
    return values, summary
