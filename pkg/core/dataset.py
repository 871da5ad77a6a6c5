# core/dataset.py
"""In-memory SOCM dataset and its CSV / JSONL persistence with checksum sidecar."""
import hashlib
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

import jsonlines
import numpy as np
import pandas as pd

from core.coxeter import ORDERS, SOCM, SOCM_WIDTH
from core.euclidean import euclidean_rows
from core.exceptions import DatasetError
from core.ga import DIMENSION, grade_masks
from core.root_systems import all_permutations, permutation_ranks
from schemas.algebra import AlgebraKind, DatasetFormat, Frame
from schemas.sweep import DatasetManifest

logger = logging.getLogger(__name__)

BLADES = 1 << DIMENSION
PERM_COLUMNS = [f"p{i}" for i in range(DIMENSION)]
SOCM_COLUMNS = [f"inv{r}_b{m:03d}" for r in range(ORDERS) for m in range(BLADES)]
CSV_COLUMNS = PERM_COLUMNS + SOCM_COLUMNS

PathLike = Union[str, Path]


def compact_integers(arr: np.ndarray) -> np.ndarray:
    """Cast to the smallest signed integer dtype holding every value."""
    arr = np.asarray(arr)
    if arr.size == 0:
        return arr.astype(np.int16)
    lo, hi = int(arr.min()), int(arr.max())
    for dtype in (np.int16, np.int32, np.int64):
        info = np.iinfo(dtype)
        if info.min <= lo and hi <= info.max:
            return arr.astype(dtype)
    raise DatasetError("coefficients exceed int64", low=lo, high=hi)


@dataclass(eq=False)
class Dataset:
    algebra: AlgebraKind
    perms: np.ndarray
    socm: np.ndarray
    frame: Frame = Frame.SIMPLE_ROOT

    def __post_init__(self):
        self.algebra = AlgebraKind(self.algebra)
        self.frame = Frame(self.frame)
        self.perms = np.asarray(self.perms, dtype=np.int8)
        if self.perms.ndim != 2 or self.perms.shape[1] != DIMENSION:
            raise DatasetError("permutation block must have 8 columns", shape=self.perms.shape)
        self.socm = np.asarray(self.socm)
        if self.socm.ndim != 2 or self.socm.shape != (self.perms.shape[0], SOCM_WIDTH):
            raise DatasetError("SOCM block must be rows x 2304", shape=self.socm.shape)
        self.socm = compact_integers(self.socm)

    @property
    def rows(self) -> int:
        return int(self.perms.shape[0])

    def __len__(self) -> int:
        return self.rows

    def ranks(self) -> np.ndarray:
        if self.is_complete():
            return np.arange(self.rows, dtype=np.int64)
        return permutation_ranks(self.perms)

    def is_complete(self) -> bool:
        """One row per permutation in lexicographic rank order."""
        full = all_permutations(DIMENSION)
        return self.rows == full.shape[0] and np.array_equal(self.perms, full)

    def row(self, i: int) -> SOCM:
        if self.frame is not Frame.SIMPLE_ROOT:
            raise DatasetError("only simple-root rows rebuild as SOCM multivectors", frame=self.frame.value)
        return SOCM.from_coefficients(self.socm[i], self.perms[i], self.algebra)

    def order_block(self, r: int) -> np.ndarray:
        return self.socm[:, r * BLADES:(r + 1) * BLADES]

    def subinvariant_block(self, r: int, k: int) -> np.ndarray:
        """(rows, C(8,k)) coefficients of grade k in Inv_r, ascending blade mask."""
        return self.order_block(r)[:, grade_masks(k, DIMENSION)]

    def to_euclidean(self) -> "Dataset":
        """The same rows in the orthonormal frame, coefficients doubled."""
        if self.frame is Frame.EUCLIDEAN:
            return self
        return Dataset(self.algebra, self.perms, euclidean_rows(self.algebra, self.socm), Frame.EUCLIDEAN)

    def zero_counts(self) -> np.ndarray:
        """Vanishing coefficients per row, counted in the orthonormal frame."""
        return (self.to_euclidean().socm == 0).sum(axis=1)

    def equals(self, other: "Dataset") -> bool:
        return (
            self.algebra == other.algebra
            and self.frame == other.frame
            and np.array_equal(self.perms, other.perms)
            and np.array_equal(self.socm.astype(np.int64), other.socm.astype(np.int64))
        )


# -- persistence ----------------------------------------------------------------


def manifest_path(path: PathLike) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".manifest.json")


def file_sha256(path: PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def _format_for(path: Path, fmt: Optional[DatasetFormat] = None) -> DatasetFormat:
    if fmt is not None:
        return DatasetFormat(fmt)
    suffix = path.suffix.lower().lstrip(".")
    try:
        return DatasetFormat(suffix)
    except ValueError:
        raise DatasetError(f"cannot infer dataset format from '{path.name}'", exit_code=2)


def persist(d: Dataset, path: PathLike, fmt: Optional[DatasetFormat] = None) -> DatasetManifest:
    path = Path(path)
    fmt = _format_for(path, fmt)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        if fmt is DatasetFormat.CSV:
            frame = pd.DataFrame(np.hstack([d.perms.astype(np.int64), d.socm.astype(np.int64)]), columns=CSV_COLUMNS)
            frame.to_csv(path, index=False, lineterminator="\n")
        else:
            with jsonlines.open(path, mode="w", compact=True) as writer:
                for perm, row in zip(d.perms.tolist(), d.socm.tolist()):
                    writer.write({"perm": perm, "socm": row})
    except OSError as e:
        raise DatasetError(f"failed to write dataset {path}: {e}")

    manifest = DatasetManifest(
        algebra=d.algebra,
        format=fmt,
        rows=d.rows,
        columns=len(CSV_COLUMNS),
        dtype=str(d.socm.dtype),
        sha256=file_sha256(path),
        frame=d.frame,
    )
    manifest_path(path).write_text(manifest.model_dump_json(indent=2) + "\n")
    logger.info("✅ Wrote %s %s dataset (%d rows) to %s", d.algebra.label, d.frame.value, d.rows, path)
    return manifest


def _infer_algebra(path: Path) -> Optional[AlgebraKind]:
    found = re.findall(r"(a8|d8|e8)", path.stem.lower())
    return AlgebraKind(found[0]) if len(set(found)) == 1 else None


def _infer_frame(path: Path) -> Frame:
    return Frame.EUCLIDEAN if "euclidean" in path.stem.lower() else Frame.SIMPLE_ROOT


def _read_csv(path: Path) -> np.ndarray:
    try:
        header = pd.read_csv(path, nrows=0).columns.tolist()
    except (OSError, pd.errors.EmptyDataError) as e:
        raise DatasetError(f"cannot read {path}: {e}")
    if header != CSV_COLUMNS:
        raise DatasetError("CSV header does not match the SOCM schema", path=str(path), columns=len(header))
    frame = pd.read_csv(path, dtype=np.int64)
    return frame.to_numpy()


def _read_jsonl(path: Path) -> np.ndarray:
    rows: List[List[int]] = []
    try:
        with jsonlines.open(path) as reader:
            for lineno, obj in enumerate(reader, start=1):
                if not isinstance(obj, dict) or set(obj) != {"perm", "socm"}:
                    raise DatasetError("JSONL row must have exactly 'perm' and 'socm'", path=str(path), line=lineno)
                perm, socm = obj["perm"], obj["socm"]
                if len(perm) != DIMENSION or len(socm) != SOCM_WIDTH:
                    raise DatasetError("JSONL row has wrong width", path=str(path), line=lineno)
                rows.append(perm + socm)
    except (OSError, jsonlines.InvalidLineError) as e:
        raise DatasetError(f"cannot read {path}: {e}")
    if not rows:
        return np.zeros((0, len(CSV_COLUMNS)), dtype=np.int64)
    return np.asarray(rows, dtype=np.int64)


def load(path: PathLike, algebra: Optional[AlgebraKind] = None) -> Dataset:
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"dataset {path} does not exist")
    fmt = _format_for(path)

    manifest: Optional[DatasetManifest] = None
    sidecar = manifest_path(path)
    if sidecar.exists():
        manifest = DatasetManifest.model_validate_json(sidecar.read_text())
        actual = file_sha256(path)
        if actual != manifest.sha256:
            raise DatasetError("dataset checksum mismatch", path=str(path), expected=manifest.sha256, actual=actual)
    else:
        logger.warning("⚠️ No manifest next to %s; checksum not verified", path)

    kind = AlgebraKind(manifest.algebra) if manifest else (AlgebraKind(algebra) if algebra else _infer_algebra(path))
    if kind is None:
        raise DatasetError(f"cannot determine the algebra of {path}; pass it explicitly")

    table = _read_csv(path) if fmt is DatasetFormat.CSV else _read_jsonl(path)
    if manifest and table.shape[0] != manifest.rows:
        raise DatasetError("row count differs from manifest", expected=manifest.rows, actual=table.shape[0])
    frame = Frame(manifest.frame) if manifest else _infer_frame(path)
    return Dataset(kind, table[:, :DIMENSION], table[:, DIMENSION:], frame)
