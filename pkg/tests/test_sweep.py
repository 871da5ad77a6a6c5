import numpy as np
import pytest

from core.coxeter import reflection_product
from core.dataset import Dataset
from core.exceptions import DatasetError
from core.root_systems import all_permutations
from schemas.algebra import AlgebraKind, VerifyLevel
from tasks import sweep


def test_chunk_ranges_cover_everything():
    assert sweep.chunk_ranges(10, 4) == [(0, 4), (4, 8), (8, 10)]
    assert sweep.chunk_ranges(3, 0) == [(0, 1), (1, 2), (2, 3)]


def test_sample_ranks_always_include_zero():
    picks = sweep.sample_ranks(40320, 5)
    assert picks[0] == 0 and picks[-1] == 40319
    assert len(picks) == 5
    assert sweep.sample_ranks(4, 10) == [0, 1, 2, 3]


def test_map_matrices_match_reflection_products(root_systems):
    rs = root_systems[AlgebraKind.E8]
    perms = all_permutations()[::4001]
    mats = sweep.map_matrices(rs, perms)
    for p, m in zip(perms, mats):
        assert np.array_equal(m, reflection_product(rs, tuple(int(x) for x in p)))


def test_full_sweep_merges_chunks_in_rank_order(mocker, root_systems, a8_small):
    subset = all_permutations()[:48]
    mocker.patch("tasks.sweep.all_permutations", return_value=subset)
    d = sweep.full_sweep(root_systems[AlgebraKind.A8], workers=1, chunk_size=16)
    assert d.rows == 48
    assert np.array_equal(d.perms, subset)
    assert np.array_equal(d.socm[:24], a8_small.socm)


def test_sampled_verification_passes(root_systems, small_datasets):
    rs = root_systems[AlgebraKind.D8]
    report = sweep.verify_dataset(rs, small_datasets[AlgebraKind.D8], VerifyLevel.SAMPLED, samples=2)
    assert report.passed, report.failed_checks()
    assert report.sampled_ranks == [0, 23]
    names = {c.name for c in report.checks}
    assert {"zero_count", "cayley_hamilton", "versor_route_agreement", "euclidean_route_agreement", "char_poly_identity"} <= names


def test_broken_mirror_is_reported(root_systems, a8_small):
    socm = a8_small.socm.astype(np.int64)
    socm[7, 256 + 3] += 2
    tampered = Dataset(AlgebraKind.A8, a8_small.perms, socm)
    checks = {c.name: c for c in sweep.row_checks(root_systems[AlgebraKind.A8], tampered)}
    assert not checks["mirror_symmetry"].passed
    assert checks["mirror_symmetry"].failures == [7]
    assert checks["cayley_hamilton"].passed
    assert checks["coxeter_order"].passed


def test_zero_count_check_fails_off_the_half_integer_lattice(root_systems, a8_small):
    socm = a8_small.socm.astype(np.int64)
    socm[5, 256 + (1 | 1 << 7)] += 1
    tampered = Dataset(AlgebraKind.A8, a8_small.perms, socm)
    checks = {c.name: c for c in sweep.row_checks(root_systems[AlgebraKind.A8], tampered)}
    assert not checks["zero_count"].passed
    assert "half-integer" in checks["zero_count"].detail


def test_verification_needs_simple_root_rows(root_systems, a8_small):
    with pytest.raises(DatasetError):
        sweep.verify_dataset(root_systems[AlgebraKind.A8], a8_small.to_euclidean())


@pytest.mark.slow
def test_full_sweep_is_complete(full_datasets):
    for d in full_datasets.values():
        assert d.is_complete()
        assert d.rows == 40320
