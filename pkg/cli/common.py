# cli/common.py
"""Shared plumbing for the commands: paths, config echo, dataset loading, error mapping."""
import functools
import logging
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import pandas as pd
import typer
import yaml
from pydantic import ValidationError

from core.config import settings
from core.dataset import Dataset, load
from core.exceptions import DatasetError, SocmError, VerificationFailed
from schemas.algebra import AlgebraKind, Frame
from schemas.ml import TrainingConfig
from schemas.sweep import RunConfig

logger = logging.getLogger(__name__)

RUN_CONFIG = "run_config.json"


class AlgebraChoice(str, Enum):
    A8 = "a8"
    D8 = "d8"
    E8 = "e8"
    ALL = "all"

    def kinds(self) -> List[AlgebraKind]:
        if self is AlgebraChoice.ALL:
            return list(AlgebraKind)
        return [AlgebraKind(self.value)]


def handle_errors(fn: Callable) -> Callable:
    """Turn domain and I/O errors into a logged message and the matching exit code."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SocmError as e:
            logger.error("❌ %s: %s", type(e).__name__, e)
            raise typer.Exit(code=e.exit_code)
        except OSError as e:
            logger.error("❌ I/O error: %s", e)
            raise typer.Exit(code=2)

    return wrapper


def output_dir(out: Optional[Path]) -> Path:
    path = Path(out or settings.socm_output_dir).expanduser().resolve()
    path.mkdir(parents=True, exist_ok=True)
    return path


def resolve_inputs(paths: Iterable[Path]) -> List[Path]:
    resolved = []
    for p in paths:
        p = Path(p).expanduser().resolve()
        if not p.exists():
            raise DatasetError(f"input {p} does not exist")
        resolved.append(p)
    return resolved


def echo_config(out: Path, command: str, **fields) -> RunConfig:
    """Write the resolved configuration before the command does any work."""
    fields.setdefault("workers", settings.socm_workers)
    fields.setdefault("seed", settings.socm_seed)
    config = RunConfig(command=command, output_dir=str(out), **fields)
    (out / RUN_CONFIG).write_text(config.model_dump_json(indent=2) + "\n")
    logger.debug("Run config: %s", config.model_dump())
    return config


def load_datasets(paths: Sequence[Path], algebra: Optional[AlgebraKind] = None) -> Dict[AlgebraKind, Dataset]:
    datasets: Dict[AlgebraKind, Dataset] = {}
    for path in paths:
        d = load(path, algebra if len(paths) == 1 else None)
        if d.frame is not Frame.SIMPLE_ROOT:
            raise DatasetError("analyses take simple-root datasets; orthonormal rows are derived from them", path=str(path))
        if d.algebra in datasets:
            raise DatasetError(f"two datasets given for {d.algebra.label}", path=str(path))
        datasets[d.algebra] = d
        logger.info("✅ Loaded %s dataset: %d rows from %s", d.algebra.label, d.rows, path)
    return datasets


def load_training_config(path: Optional[Path], **overrides) -> TrainingConfig:
    """YAML key/value file merged with the non-empty command-line overrides."""
    values: dict = {}
    if path is not None:
        try:
            values = yaml.safe_load(Path(path).read_text()) or {}
        except yaml.YAMLError as e:
            raise DatasetError(f"cannot parse training config {path}: {e}")
        if not isinstance(values, dict):
            raise DatasetError(f"training config {path} must be a mapping")
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return TrainingConfig(**values)
    except ValidationError as e:
        raise DatasetError("invalid training config", errors=e.error_count(), first=e.errors()[0]["msg"])


def write_frame(path: Path, frame: pd.DataFrame) -> Path:
    frame.to_csv(path, index=False, lineterminator="\n")
    logger.debug("Wrote %s", path)
    return path


def enforce(failures: List[str], what: str) -> None:
    """Raise when any acceptance check failed."""
    if failures:
        for failure in failures:
            logger.error("❌ %s", failure)
        raise VerificationFailed(f"{what}: {len(failures)} acceptance check(s) failed", failed=failures[0])
    logger.info("✅ %s: acceptance checks passed", what)
