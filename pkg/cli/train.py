# cli/train.py
import logging
from pathlib import Path
from typing import List, Optional

import pandas as pd
import typer

from analysis.mlp import save_model
from analysis.training import build_task_data, run_task
from cli.checks import training_failures
from cli.common import echo_config, enforce, handle_errors, load_datasets, load_training_config, output_dir, resolve_inputs, write_frame
from schemas.algebra import AlgebraKind
from schemas.ml import TaskKind

logger = logging.getLogger(__name__)


def model_path(out: Path, task: str) -> Path:
    return out / f"{task}.model.pt"


@handle_errors
def cmd_train(
    task: Optional[TaskKind] = typer.Option(None, "--task", help="Learning task (overrides the config file)."),
    config: Optional[Path] = typer.Option(None, "--config", help="YAML training configuration."),
    dataset: List[Path] = typer.Option(..., "--dataset", help="Dataset file(s); repeat for several algebras."),
    algebra: Optional[AlgebraKind] = typer.Option(None, "--algebra", help="Target algebra (overrides the config file)."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Training seed (overrides the config file)."),
    workers: Optional[int] = typer.Option(None, "--workers", min=1, help="Fold worker processes (overrides the config file)."),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory (default: SOCM_OUTPUT_DIR)."),
    check: bool = typer.Option(False, "--check", help="Fail unless the accuracy meets its target."),
    expect: Optional[float] = typer.Option(None, "--expect", help="Reference accuracy for --check."),
):
    """Train the MLP for one task with k-fold cross-validation and keep the fitted model."""
    out = output_dir(out)
    config_path = resolve_inputs([config])[0] if config else None
    training = load_training_config(config_path, task=task, algebra=algebra, seed=seed, workers=workers)
    paths = resolve_inputs(dataset)
    datasets = load_datasets(paths)
    inputs = {d.algebra.value: str(p) for p, d in zip(paths, datasets.values())}
    echo_config(
        out,
        "train",
        algebras=list(datasets),
        workers=training.workers,
        seed=training.seed,
        inputs={**inputs, **({"config": str(config_path)} if config_path else {})},
        options={"training": training.model_dump(), "check": check, "expect": expect},
    )

    data = build_task_data(training, datasets)
    result = run_task(training, data)

    if result.cv is not None:
        rows = [
            {"fold": f.fold, "epoch": m.epoch, "loss": m.loss}
            for f in result.cv.folds
            for m in f.history
        ]
    else:
        rows = [{"fold": 0, "epoch": m.epoch, "loss": m.loss} for m in result.trained.history]
    write_frame(out / f"{training.task}.metrics.csv", pd.DataFrame(rows, columns=["fold", "epoch", "loss"]))
    (out / f"{training.task}.summary.json").write_text(result.summary.model_dump_json(indent=2) + "\n")
    save_model(model_path(out, training.task), result.trained, training, result.test_index, inputs)
    logger.info("✅ %s accuracy %.4f; model saved to %s", training.task, result.summary.accuracy, model_path(out, training.task))

    if check:
        enforce(training_failures(training.task, result.summary.accuracy, expect), f"{training.task} training")
