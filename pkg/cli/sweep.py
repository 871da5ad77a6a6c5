# cli/sweep.py
import logging
from pathlib import Path
from typing import List, Optional

import typer

from cli.common import AlgebraChoice, echo_config, handle_errors, output_dir
from core.config import settings
from core.dataset import persist
from core.exceptions import VerificationFailed
from core.root_systems import build_root_system
from schemas.algebra import DatasetFormat, VerifyLevel
from tasks.sweep import full_sweep, verify_dataset

logger = logging.getLogger(__name__)


def verification_path(dataset: Path) -> Path:
    return dataset.with_name(dataset.name + ".verification.json")


@handle_errors
def cmd_sweep(
    algebra: AlgebraChoice = typer.Option(AlgebraChoice.ALL, "--algebra", help="Root system to sweep."),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory (default: SOCM_OUTPUT_DIR)."),
    workers: Optional[int] = typer.Option(None, "--workers", min=1, help="Worker processes (default: SOCM_WORKERS)."),
    fmt: DatasetFormat = typer.Option(DatasetFormat.CSV, "--format", help="Dataset file format."),
    verify: VerifyLevel = typer.Option(VerifyLevel.SAMPLED, "--verify", help="Verification depth."),
    euclidean: bool = typer.Option(True, "--euclidean/--no-euclidean", help="Also write the orthonormal-frame dataset."),
):
    """Compute the SOCM of every Coxeter element, persist and verify it."""
    out = output_dir(out)
    workers = workers or settings.socm_workers
    kinds = algebra.kinds()
    echo_config(out, "sweep", algebras=kinds, workers=workers, format=fmt, verify=verify, options={"euclidean": euclidean})

    failed: List[str] = []
    for kind in kinds:
        rs = build_root_system(kind)
        d = full_sweep(rs, workers=workers)
        path = out / f"{kind.value}.{fmt.value}"
        persist(d, path, fmt)
        report = verify_dataset(rs, d, verify, workers=workers)
        verification_path(path).write_text(report.model_dump_json(indent=2) + "\n")
        if not report.passed:
            failed.extend(f"{kind.label}:{name}" for name in report.failed_checks())
        elif euclidean:
            persist(d.to_euclidean(), out / f"{kind.value}.euclidean.{fmt.value}", fmt)
    if failed:
        raise VerificationFailed("dataset verification failed", checks=", ".join(failed))
    logger.info("✅ Sweep finished for %s", ", ".join(k.label for k in kinds))
