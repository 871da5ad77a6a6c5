import json

import numpy as np
import pytest

from core.dataset import (
    CSV_COLUMNS,
    Dataset,
    compact_integers,
    load,
    manifest_path,
    persist,
)
from core.exceptions import DatasetError
from schemas.algebra import AlgebraKind, DatasetFormat, Frame


@pytest.mark.parametrize("suffix", ["csv", "jsonl"])
def test_persist_and_load_preserve_every_row(tmp_path, a8_small, suffix):
    path = tmp_path / f"a8.{suffix}"
    manifest = persist(a8_small, path)
    assert manifest.rows == a8_small.rows
    assert manifest.format == suffix
    assert manifest_path(path).exists()

    loaded = load(path)
    assert loaded.algebra is AlgebraKind.A8
    assert loaded.equals(a8_small)
    assert np.array_equal(loaded.ranks(), a8_small.ranks())


def test_csv_header_is_permutation_then_coefficients(tmp_path, a8_small):
    path = tmp_path / "a8.csv"
    persist(a8_small, path)
    header = path.read_text().splitlines()[0].split(",")
    assert header[:9] == ["p0", "p1", "p2", "p3", "p4", "p5", "p6", "p7", "inv0_b000"]
    assert header[-1] == "inv8_b255"
    assert len(header) == len(CSV_COLUMNS) == 2312


def test_csv_keeps_coefficients_beyond_int32(tmp_path, a8_small):
    socm = a8_small.socm.astype(np.int64)
    socm[0, 1] = 1 << 40
    socm[1, 2] = -(1 << 35)
    wide = Dataset(AlgebraKind.A8, a8_small.perms, socm)
    path = tmp_path / "a8.csv"
    assert persist(wide, path).dtype == "int64"
    loaded = load(path)
    assert loaded.socm.dtype == np.int64
    assert loaded.equals(wide)


def test_orthonormal_dataset_keeps_its_frame(tmp_path, a8_small):
    e = a8_small.to_euclidean()
    path = tmp_path / "a8.euclidean.csv"
    assert persist(e, path).frame == "euclidean"
    loaded = load(path)
    assert loaded.frame is Frame.EUCLIDEAN
    assert loaded.equals(e)
    assert not loaded.equals(a8_small)
    with pytest.raises(DatasetError):
        loaded.row(0)

    manifest_path(path).unlink()
    assert load(path).frame is Frame.EUCLIDEAN


def test_tampered_file_fails_checksum(tmp_path, a8_small):
    path = tmp_path / "a8.csv"
    persist(a8_small, path)
    lines = path.read_text().splitlines()
    lines[1] = lines[1].replace(",1,", ",3,", 1)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(DatasetError, match="checksum"):
        load(path)


def test_wrong_header_rejected(tmp_path):
    path = tmp_path / "a8.csv"
    path.write_text("x,y\n1,2\n")
    with pytest.raises(DatasetError, match="header"):
        load(path)


def test_algebra_inferred_from_file_name_without_manifest(tmp_path, small_datasets):
    path = tmp_path / "socm_e8.jsonl"
    persist(small_datasets[AlgebraKind.E8], path)
    manifest_path(path).unlink()
    assert load(path).algebra is AlgebraKind.E8

    ambiguous = tmp_path / "rows.jsonl"
    path.rename(ambiguous)
    with pytest.raises(DatasetError, match="algebra"):
        load(ambiguous)
    assert load(ambiguous, AlgebraKind.E8).rows == small_datasets[AlgebraKind.E8].rows


def test_malformed_jsonl_row(tmp_path):
    path = tmp_path / "d8.jsonl"
    path.write_text(json.dumps({"perm": [0, 1], "socm": []}) + "\n")
    with pytest.raises(DatasetError, match="width"):
        load(path)


def test_unknown_format_and_missing_file(tmp_path, a8_small):
    with pytest.raises(DatasetError):
        persist(a8_small, tmp_path / "a8.parquet")
    with pytest.raises(DatasetError, match="does not exist"):
        load(tmp_path / "nothing.csv")
    assert persist(a8_small, tmp_path / "a8.out", DatasetFormat.JSONL).format == "jsonl"


def test_compact_integers_picks_smallest_dtype():
    assert compact_integers(np.array([1, -5, 300])).dtype == np.int16
    assert compact_integers(np.array([1, 40000])).dtype == np.int32
    assert compact_integers(np.array([1 << 40])).dtype == np.int64


def test_dataset_shape_validation(a8_small):
    with pytest.raises(DatasetError):
        Dataset(AlgebraKind.A8, a8_small.perms[:, :7], a8_small.socm)
    with pytest.raises(DatasetError):
        Dataset(AlgebraKind.A8, a8_small.perms, a8_small.socm[:, :100])


def test_blocks(a8_small):
    assert a8_small.order_block(8).shape == (24, 256)
    assert a8_small.subinvariant_block(4, 8).shape == (24, 1)
    assert not a8_small.is_complete()
    assert a8_small.ranks().tolist() == list(range(24))
