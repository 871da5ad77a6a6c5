import math

import numpy as np
import pytest

from analysis.graphs import (
    EDGE_SLOTS,
    BivectorGraph,
    adjacency_from_bits,
    canonical_codes,
    canonical_form,
    centrality_histograms,
    connected_mask,
    distinct_values,
    eigenvector_centrality,
    graph_census,
    graph_from_adjacency,
    max_eigenvalue,
    random_connected_baseline,
    to_graph,
)
from core.coxeter import socm, subinvariant
from core.exceptions import GradeError, GraphError
from core.ga import DIMENSION
from schemas.algebra import AlgebraKind
from tests.helpers import bipartite_permutation

MOST_CENTRAL = {AlgebraKind.A8: 4, AlgebraKind.D8: 6, AlgebraKind.E8: 5}


def star() -> BivectorGraph:
    adj = np.zeros((DIMENSION, DIMENSION), dtype=int)
    adj[0, 1:] = adj[1:, 0] = 1
    return graph_from_adjacency(adj)


@pytest.mark.parametrize("kind", list(AlgebraKind))
def test_dynkin_perron_root(root_systems, kind):
    rs = root_systems[kind]
    g = graph_from_adjacency(rs.adjacency)
    assert max_eigenvalue(g) == pytest.approx(2 * math.cos(math.pi / rs.coxeter_number), abs=1e-12)


@pytest.mark.parametrize("kind", list(AlgebraKind))
def test_dynkin_most_central_node(root_systems, kind):
    stats = eigenvector_centrality(graph_from_adjacency(root_systems[kind].adjacency))
    assert stats.most_central_index == MOST_CENTRAL[kind]
    assert min(stats.centrality) > 0
    assert sum(c * c for c in stats.centrality) == pytest.approx(1.0)
    assert stats.centrality_variance == pytest.approx(float(np.var(stats.centrality)))


def test_star_spectrum():
    g = star()
    assert max_eigenvalue(g) == pytest.approx(math.sqrt(7))
    assert eigenvector_centrality(g).most_central_index == 1


def test_empty_and_disconnected_graphs():
    empty = BivectorGraph((0,) * EDGE_SLOTS)
    assert empty.is_empty
    assert max_eigenvalue(empty) == 0.0
    with pytest.raises(GraphError):
        eigenvector_centrality(empty)
    single_edge = BivectorGraph((5,) + (0,) * (EDGE_SLOTS - 1))
    with pytest.raises(GraphError):
        eigenvector_centrality(single_edge)
    with pytest.raises(GraphError):
        BivectorGraph((1, 0, 1))


def test_connected_mask(root_systems):
    adjs = np.stack([root_systems[AlgebraKind.E8].adjacency, np.zeros((DIMENSION, DIMENSION), dtype=np.int64)])
    assert connected_mask(adjs).tolist() == [True, False]


def test_canonical_form_is_relabelling_invariant(root_systems):
    adj = np.asarray(root_systems[AlgebraKind.D8].adjacency)
    perm = np.random.default_rng(2).permutation(DIMENSION)
    relabelled = adj[np.ix_(perm, perm)]
    assert canonical_form(graph_from_adjacency(adj)) == canonical_form(graph_from_adjacency(relabelled))
    path = graph_from_adjacency(root_systems[AlgebraKind.A8].adjacency)
    assert canonical_form(path) != canonical_form(star())
    assert canonical_form(path) != canonical_form(graph_from_adjacency(adj))


def test_canonical_codes_batch_consistency(root_systems):
    bits = np.stack([graph_from_adjacency(rs.adjacency).bits for rs in root_systems.values()])
    codes = canonical_codes(np.concatenate([bits, bits[::-1]]), batch=2)
    assert codes[:3].tolist() == codes[3:][::-1].tolist()
    assert len(set(codes[:3].tolist())) == 3


def test_bipartite_inv1_graph_is_the_dynkin_diagram(root_systems):
    rs = root_systems[AlgebraKind.E8]
    sub = subinvariant(socm(rs, bipartite_permutation(rs)), 1, 2)
    g = to_graph(sub, ("e8", 1, 0))
    assert np.array_equal(g.adjacency, rs.adjacency)
    assert max_eigenvalue(g) < 2
    with pytest.raises(GradeError):
        to_graph(subinvariant(socm(rs, bipartite_permutation(rs)), 2, 4))


def test_distinct_values_merges_within_tolerance():
    assert distinct_values(np.array([1.0, 1.0 + 1e-12, 2.0, 3.0]), tol=1e-9) == 3
    assert distinct_values(np.array([])) == 0


def test_random_baseline_is_deterministic():
    values, summary = random_connected_baseline(200, seed=0, batch=1024)
    again, _ = random_connected_baseline(200, seed=0, batch=1024)
    assert values.shape == (200,)
    assert np.array_equal(values, again)
    assert summary.samples == 200 and summary.seed == 0
    # a connected graph on 8 nodes contains a spanning tree, so λ ≥ λ(path)
    assert summary.min_eigenvalue >= 2 * math.cos(math.pi / 9) - 1e-9
    assert summary.max_eigenvalue <= 7 + 1e-9
    with pytest.raises(GraphError):
        random_connected_baseline(0)


def test_adjacency_from_bits_is_symmetric():
    bits = np.zeros((1, EDGE_SLOTS), dtype=np.int64)
    bits[0, 0] = 1
    adj = adjacency_from_bits(bits)[0]
    assert adj[0, 1] == adj[1, 0] == 1
    assert adj.sum() == 2


def test_graph_census_on_small_dataset(a8_small):
    census = graph_census(a8_small)
    assert census.algebra == "a8"
    assert census.all_connected
    assert len(census.eigenvalue_counts) == 4
    assert census.iso_classes <= census.distinct_adjacencies <= census.distinct_subinvariants
    assert min(census.repeats.subinvariants, census.repeats.adjacencies, census.repeats.graphs) >= 0


def test_centrality_histograms_count_every_graph(a8_small):
    nodes, variances = centrality_histograms(a8_small)
    per_order = {}
    for b in nodes:
        per_order[b.order] = per_order.get(b.order, 0) + b.count
    assert sorted(per_order) == list(range(1, 8))
    assert all(total <= a8_small.rows for total in per_order.values())
    assert variances
