from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from core import exact
from core.coxeter import SOCM_WIDTH, reflection_product, socm
from core.euclidean import EUCLIDEAN_SCALE, euclidean_map, euclidean_rows, socm_euclidean, zero_counts
from core.exceptions import KernelInvariantError, MetricError
from core.ga import DIMENSION
from core.root_systems import COXETER_NUMBERS, DYNKIN_EDGES, EUCLIDEAN_ROOTS, RootSystem, all_permutations
from schemas.algebra import AlgebraKind
from tasks.sweep import ZERO_COUNTS
from tests.helpers import bipartite_permutation, build_dataset

PERM = (3, 1, 4, 0, 5, 2, 7, 6)


@pytest.mark.parametrize("kind", list(AlgebraKind))
def test_embedding_reproduces_the_cartan_matrix(root_systems, kind):
    rs = root_systems[kind]
    assert np.array_equal(rs.euclidean @ rs.euclidean.T, 4 * rs.cartan)


def test_embedding_that_breaks_the_cartan_matrix_is_rejected(mocker):
    doubled_identity = (2 * np.eye(DIMENSION, dtype=int)).tolist()
    mocker.patch.dict(EUCLIDEAN_ROOTS, {AlgebraKind.A8: doubled_identity})
    rs = RootSystem(AlgebraKind.A8, DYNKIN_EDGES[AlgebraKind.A8], COXETER_NUMBERS[AlgebraKind.A8])
    with pytest.raises(MetricError):
        rs.euclidean


@pytest.mark.parametrize("kind", list(AlgebraKind))
def test_orthonormal_map_is_the_simple_root_map_in_new_coordinates(root_systems, kind):
    rs = root_systems[kind]
    # columns: doubled root coordinates
    V = [[Fraction(int(x)) for x in row] for row in rs.euclidean.T]
    simple = reflection_product(rs, PERM).tolist()
    assert exact.matmul(euclidean_map(rs, PERM), V) == exact.matmul(V, simple)


@pytest.mark.parametrize("kind", list(AlgebraKind))
def test_conversion_matches_the_direct_orthonormal_route(root_systems, kind):
    rs = root_systems[kind]
    for p in (PERM, bipartite_permutation(rs)):
        converted = euclidean_rows(kind, socm(rs, p).coefficients()[None, :])[0]
        assert np.array_equal(converted, socm_euclidean(rs, p))
        assert converted[0] == EUCLIDEAN_SCALE
        assert np.count_nonzero(converted == 0) == ZERO_COUNTS[kind]


@pytest.mark.parametrize("kind", list(AlgebraKind))
def test_zero_count_is_constant_on_a_seeded_sample_of_ranks(kind):
    ranks = np.random.default_rng(2024).choice(factorial(DIMENSION), size=12, replace=False)
    d = build_dataset(kind, np.array(all_permutations()[np.sort(ranks)]))
    assert (d.zero_counts() == ZERO_COUNTS[kind]).all()
    assert (zero_counts(kind, d.socm) == ZERO_COUNTS[kind]).all()


def test_d8_stays_integral_in_the_orthonormal_frame(small_datasets):
    d = small_datasets[AlgebraKind.D8]
    rows = euclidean_rows(AlgebraKind.D8, d.socm)
    assert rows.shape == (d.rows, SOCM_WIDTH)
    assert not np.any(rows % EUCLIDEAN_SCALE)


def test_non_half_integer_row_is_rejected():
    row = np.zeros((1, SOCM_WIDTH), dtype=np.int64)
    row[0, 256 + (1 | 1 << 7)] = 1
    with pytest.raises(KernelInvariantError):
        euclidean_rows(AlgebraKind.A8, row)


def test_rows_must_be_full_width():
    with pytest.raises(KernelInvariantError):
        euclidean_rows(AlgebraKind.D8, np.zeros((2, 100), dtype=np.int64))
