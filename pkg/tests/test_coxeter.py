from fractions import Fraction

import numpy as np
import pytest

from core.coxeter import (
    ORDERS,
    SOCM,
    MapMatrix,
    apply_map,
    char_poly,
    coxeter_versor,
    grade_pattern,
    is_unit_versor,
    matrix_of_map,
    reflection_product,
    socm,
    socm_by_versor,
    socm_from_matrix,
    subinvariant,
    subinvariant_width,
    verify_char_poly_identity,
    verify_invariance,
)
from core.exceptions import GradeError, KernelInvariantError
from core.ga import DIMENSION, Multivector
from core.root_systems import DYNKIN_EDGES
from schemas.algebra import AlgebraKind
from tasks.sweep import ZERO_COUNTS
from tests.helpers import bipartite_permutation

SCALAR_PARTS = {
    AlgebraKind.A8: [1, -1, 1, -1, 1, -1, 1, -1, 1],
    AlgebraKind.D8: [1, -1, 0, 0, 0, 0, 0, -1, 1],
    AlgebraKind.E8: [1, -1, 0, 1, -1, 1, 0, -1, 1],
}

PERM = (3, 1, 4, 0, 5, 2, 7, 6)


@pytest.fixture(scope="module")
def versors(root_systems):
    return {kind: coxeter_versor(root_systems[kind], PERM) for kind in AlgebraKind}


@pytest.mark.parametrize("kind", list(AlgebraKind))
def test_matrix_route_matches_versor_route(root_systems, kind):
    rs = root_systems[kind]
    assert np.array_equal(socm(rs, PERM).coefficients(), socm_by_versor(rs, PERM).coefficients())


@pytest.mark.parametrize("kind", list(AlgebraKind))
def test_scalar_parts_are_char_poly_coefficients(small_datasets, kind):
    d = small_datasets[kind]
    scalars = d.socm.reshape(d.rows, ORDERS, -1)[:, :, 0]
    assert (scalars == np.array(SCALAR_PARTS[kind])).all()


@pytest.mark.parametrize("kind", list(AlgebraKind))
def test_zero_count_is_constant(small_datasets, kind):
    assert (small_datasets[kind].zero_counts() == ZERO_COUNTS[kind]).all()


def test_mirror_symmetry_and_unit_order_zero(a8_small):
    s = a8_small.row(5)
    assert s.invariants[0] == Multivector.scalar(1)
    for r in range(ORDERS):
        assert s.invariants[r] == s.invariants[DIMENSION - r]


@pytest.mark.parametrize("kind", list(AlgebraKind))
def test_bipartite_bivector_lives_on_dynkin_edges(root_systems, kind):
    rs = root_systems[kind]
    s = socm(rs, bipartite_permutation(rs))
    bivector = subinvariant(s, 1, 2).value
    edge_masks = {(1 << i) | (1 << j) for i, j in DYNKIN_EDGES[kind]}
    assert set(bivector.support().tolist()) == edge_masks
    assert all(bivector.coefficient(m) % 2 == 0 for m in edge_masks)


def test_subinvariant_shape_and_errors(a8_small):
    s = a8_small.row(0)
    sub = subinvariant(s, 4, 8)
    assert sub.order == 4 and sub.grade == 8
    assert len(sub.coefficients) == subinvariant_width(8) == 1
    assert len(subinvariant(s, 2, 4).coefficients) == 70
    with pytest.raises(GradeError):
        subinvariant(s, 9, 0)
    with pytest.raises(GradeError):
        subinvariant(s, 1, 9)


def test_grade_pattern():
    pattern = grade_pattern()
    assert pattern[0] == (0,)
    assert pattern[1] == (0, 2)
    assert pattern[4] == (0, 2, 4, 6, 8)
    assert pattern[7] == pattern[1]


def test_socm_round_trips_through_coefficients(a8_small):
    s = a8_small.row(3)
    again = SOCM.from_coefficients(s.coefficients(), s.source_permutation, "a8")
    assert again.invariants == s.invariants
    assert again.algebra is AlgebraKind.A8


@pytest.mark.parametrize("kind", [AlgebraKind.A8, AlgebraKind.E8])
def test_map_matrix_is_reflection_product(root_systems, versors, kind):
    rs = root_systems[kind]
    M = matrix_of_map(rs, versors[kind])
    assert M == MapMatrix.from_rows(reflection_product(rs, PERM))
    assert M.preserves(rs.metric)
    assert M.determinant() == 1
    assert char_poly(M).coefficients == tuple(Fraction(c) for c in SCALAR_PARTS[kind])


@pytest.mark.parametrize("kind", list(AlgebraKind))
def test_versor_identities(root_systems, versors, kind):
    rs = root_systems[kind]
    W = versors[kind]
    s = socm(rs, PERM)
    assert is_unit_versor(W)
    assert all(verify_char_poly_identity(s, W, a) for a in rs.frame)
    assert verify_invariance(W, s)


def test_map_needs_a_vector(versors):
    with pytest.raises(GradeError):
        apply_map(versors[AlgebraKind.A8], Multivector.scalar(1))


def test_non_orthogonal_map_breaks_invariants(root_systems):
    rs = root_systems[AlgebraKind.D8]
    with pytest.raises(KernelInvariantError):
        socm_from_matrix(rs, 2 * np.eye(DIMENSION, dtype=np.int64), PERM)
