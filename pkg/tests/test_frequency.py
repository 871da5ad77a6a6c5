import numpy as np
import pytest

from analysis.frequency import (
    barcode_string,
    class_relations,
    dedup_classes,
    reduce_to_classes,
    render_report,
    sign_canonical,
    subinvariant_frequencies,
)
from core.dataset import Dataset
from core.exceptions import VerificationFailed
from core.root_systems import all_permutations
from schemas.algebra import AlgebraKind


def test_sign_canonical_makes_first_nonzero_positive():
    rows = np.array([[0, -2, 3], [0, 2, -3], [1, 0, 0], [0, 0, 0]])
    out = sign_canonical(rows)
    assert out.tolist() == [[0, 2, -3], [0, 2, -3], [1, 0, 0], [0, 0, 0]]


def test_barcode_string_reads_bit_per_position():
    assert barcode_string(0b11110000) == "WWWWBBBB"
    assert barcode_string(0b01010101) == "BWBWBWBW"


@pytest.mark.parametrize("kind", list(AlgebraKind))
def test_small_sweep_has_one_class_per_orientation(small_datasets, kind):
    report = dedup_classes(small_datasets[kind])
    assert report.class_count == 8
    assert sum(c.multiplicity for c in report.classes) == 24
    assert report.classes[0].representative_rank == 0
    assert [c.representative_rank for c in report.classes] == sorted(c.representative_rank for c in report.classes)


def test_a8_small_multiplicities_and_groups(a8_small):
    report = dedup_classes(a8_small)
    assert report.sorted_multiplicities == [5, 5, 3, 3, 3, 3, 1, 1]
    assert report.parity == "odd"
    assert report.census == {"doublet": 2, "quadruplet": 1, "octuplet": 0, "other": 0}
    assert report.min_multiplicity == 1 and report.max_multiplicity == 5


def test_reduce_to_classes_keeps_representatives(a8_small):
    reduced = reduce_to_classes(a8_small)
    assert reduced.rows == 8
    assert np.unique(reduced.socm, axis=0).shape[0] == 8
    assert reduced.ranks()[0] == 0


def test_sign_identification_guard():
    perms = all_permutations()[:2]
    row = np.zeros(2304, dtype=np.int64)
    row[0], row[5] = 1, 2
    d = Dataset(AlgebraKind.D8, perms, np.stack([row, -row]))
    assert dedup_classes(d).class_count == 2
    with pytest.raises(VerificationFailed):
        dedup_classes(d, identify_sign=True)


def test_subinvariant_table_marks_absent_cells(a8_small):
    table = subinvariant_frequencies(a8_small)
    assert table.cell(0, 0) == 1
    assert table.cell(8, 0) == 1
    assert table.cell(0, 2) is None
    assert table.cell(1, 4) is None
    assert table.cell(4, 8) is not None
    signed = subinvariant_frequencies(a8_small, identify_sign=True)
    for plain_row, signed_row in zip(table.counts, signed.counts):
        for plain, up_to_sign in zip(plain_row, signed_row):
            assert (plain is None) == (up_to_sign is None)
            assert plain is None or up_to_sign <= plain


def test_relations_and_report_render(root_systems, a8_small):
    report = dedup_classes(a8_small)
    report.relations = class_relations(report, root_systems[AlgebraKind.A8])
    report.subinvariants = subinvariant_frequencies(a8_small)
    text = render_report(report)
    assert text.startswith("A8: 8 classes from 24 permutations")
    assert "A8 subinvariant frequencies" in text
    assert len(report.relations.min_doublet_representatives) == 2
