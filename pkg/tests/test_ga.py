from fractions import Fraction

import numpy as np
import pytest

from core.exceptions import GradeError, MetricError
from core.ga import (
    DIMENSION,
    Multivector,
    build_cayley_table,
    gp,
    grade_masks,
    grade_project,
    left_contraction,
    require_grade,
    reverse,
    scalar_part,
    wedge,
    wedge_all,
    wedge_chain,
)
from schemas.algebra import AlgebraKind


def vec(coeffs):
    return Multivector.vector(coeffs)


def random_sparse(rng, terms=3):
    masks = rng.choice(1 << DIMENSION, size=terms, replace=False)
    return Multivector.from_terms({int(m): int(rng.integers(-3, 4)) for m in masks})


def test_euclidean_vector_squares_to_one():
    table = build_cayley_table(np.eye(3, dtype=int))
    assert table.entry(1, 1) == Multivector.scalar(1, 3)
    assert table.entry(1, 2) == -table.entry(2, 1)


def test_non_symmetric_metric_rejected():
    with pytest.raises(MetricError):
        build_cayley_table([[1, 0], [1, 1]])


def test_adjacent_roots_anticommute_to_minus_one(root_systems):
    rs = root_systems[AlgebraKind.A8]
    a1, a2 = rs.frame[0], rs.frame[1]
    assert gp(a1, a2, rs.table) + gp(a2, a1, rs.table) == Multivector.scalar(-1)
    s = a1 + a2
    assert gp(s, s, rs.table) == Multivector.scalar(1)
    assert scalar_part(gp(a1, a2, rs.table)) == Fraction(-1, 2)


@pytest.mark.parametrize("kind", list(AlgebraKind))
def test_anticommutator_matches_metric_on_all_pairs(root_systems, kind):
    rs = root_systems[kind]
    for i in range(DIMENSION):
        for j in range(DIMENSION):
            ai, aj = rs.frame[i], rs.frame[j]
            total = gp(ai, aj, rs.table) + gp(aj, ai, rs.table)
            assert total == Multivector.scalar(2 * rs.metric[i][j])


def test_geometric_product_is_associative(root_systems):
    table = root_systems[AlgebraKind.E8].table
    rng = np.random.default_rng(7)
    for _ in range(1000):
        a, b, c = (random_sparse(rng) for _ in range(3))
        assert gp(gp(a, b, table), c, table) == gp(a, gp(b, c, table), table)


def test_identity_is_neutral(root_systems):
    table = root_systems[AlgebraKind.D8].table
    m = Multivector.from_terms({0: 2, 3: Fraction(1, 3), 0xF0: -5})
    assert gp(Multivector.scalar(1), m, table) == m
    assert gp(m, Multivector.scalar(1), table) == m


def test_vector_product_agrees_with_float_oracle(root_systems):
    rs = root_systems[AlgebraKind.E8]
    rng = np.random.default_rng(3)
    g = np.array([[float(x) for x in row] for row in rs.metric])
    for _ in range(20):
        u, v = rng.integers(-5, 6, size=(2, DIMENSION))
        prod = gp(vec(u.tolist()), vec(v.tolist()), rs.table).to_float()
        assert abs(prod[0] - u @ g @ v) < 1e-9
        bivector = wedge(vec(u.tolist()), vec(v.tolist())).to_float()
        masks = grade_masks(2)
        assert np.allclose(prod[masks], bivector[masks], atol=1e-9)
        assert np.allclose(np.delete(prod, np.concatenate([[0], masks])), 0.0, atol=1e-9)


def test_wedge_of_frame_is_pseudoscalar():
    frame = [Multivector.blade(1 << i) for i in range(DIMENSION)]
    assert wedge_all(frame) == Multivector.blade(0xFF)
    assert wedge(frame[0], frame[0]).is_zero()
    assert wedge(frame[1], frame[0]) == -Multivector.blade(0b11)


def test_wedge_chain_matches_wedge_all():
    rng = np.random.default_rng(11)
    vectors = rng.integers(-2, 3, size=(DIMENSION, DIMENSION))
    chain = wedge_chain(vectors)
    for subset in (0b1, 0b101, 0b11010010, 0xFF):
        picked = [vec(vectors[j].tolist()) for j in range(DIMENSION) if subset >> j & 1]
        assert np.array_equal(chain[subset], wedge_all(picked).integer_coefficients())


def test_reverse_signs_by_grade():
    m = Multivector.from_terms({0: 1, 1: 1, 0b11: 1, 0b111: 1, 0b1111: 1})
    r = reverse(m)
    assert [int(c) for c in r.num[[0, 1, 0b11, 0b111, 0b1111]]] == [1, 1, -1, -1, 1]
    assert reverse(r) == m


def test_grade_project_and_require_grade():
    m = Multivector.from_terms({0: 4, 0b11: 2, 0b1111: 1})
    assert grade_project(m, 2) == Multivector.blade(0b11, 2)
    with pytest.raises(GradeError):
        grade_project(m, 9)
    with pytest.raises(GradeError):
        require_grade(m, 2)


def test_left_contraction_of_vectors_is_inner_product(root_systems):
    rs = root_systems[AlgebraKind.D8]
    a, b = rs.frame[5], rs.frame[7]
    assert left_contraction(a, b, rs.table) == Multivector.scalar(rs.metric[5][7])


def test_rational_coefficients_stay_exact():
    m = Multivector.from_terms({1: Fraction(1, 2), 2: Fraction(1, 3)})
    assert m.den == 6
    assert m.coefficient(1) == Fraction(1, 2)
    doubled = m * 6
    assert doubled.is_integral()
    assert doubled.coefficients()[2] == 2
