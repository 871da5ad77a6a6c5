# cli/saliency.py
import logging
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
import typer

from analysis.mlp import ONE_HOT_WIDTH, load_model
from analysis.saliency import end_mass_ratio, gradient_saliency, position_barcode, repeated_saliency, top_components
from analysis.training import build_task_data
from cli.checks import saliency_failures
from cli.common import echo_config, enforce, handle_errors, load_datasets, output_dir, resolve_inputs, write_frame
from core.svg import bar_chart, barcode_chart
from schemas.ml import SaliencyResult, TaskKind, TrainingConfig

logger = logging.getLogger(__name__)


@handle_errors
def cmd_saliency(
    model: Path = typer.Option(..., "--model", help="Model file written by train."),
    runs: Optional[int] = typer.Option(None, "--runs", min=1, help="Average over this many retrained splits instead of the saved model."),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory (default: SOCM_OUTPUT_DIR)."),
    check: bool = typer.Option(False, "--check", help="Fail unless the saliency pattern holds."),
):
    """Input-gradient saliency of a trained model on its held-out rows."""
    out = output_dir(out)
    (path,) = resolve_inputs([model])
    net, payload = load_model(path)
    config = TrainingConfig(**payload["config"])
    datasets = load_datasets(resolve_inputs(Path(p) for p in payload["inputs"].values()))
    echo_config(
        out,
        "saliency",
        algebras=list(datasets),
        workers=config.workers,
        seed=config.seed,
        inputs={"model": str(path), **payload["inputs"]},
        options={"runs": runs, "check": check},
    )

    data = build_task_data(config, datasets)
    if runs:
        values = repeated_saliency(config, data, runs)
    else:
        X, y = (data.X_test, data.y_test) if data.X_test is not None else (data.X, data.y)
        index = np.asarray(payload["test_index"], dtype=np.int64)
        values = gradient_saliency(net, X[index], data.mode, y[index])

    positions = position_barcode(values) if values.size == ONE_HOT_WIDTH else None
    ratio = end_mass_ratio(positions) if positions is not None else None
    result = SaliencyResult(
        task=config.task,
        runs=runs or 1,
        values=values.tolist(),
        positions=None if positions is None else positions.tolist(),
    )
    stem = f"{config.task}.saliency"
    (out / f"{stem}.json").write_text(result.model_dump_json(indent=2) + "\n")
    write_frame(out / f"{stem}.csv", pd.DataFrame({"component": np.arange(values.size), "saliency": values}))
    bar_chart(out / f"{stem}.svg", values, f"{config.task}: saliency per input", xlabel="input", ylabel="mean |gradient|")
    if positions is not None:
        write_frame(out / f"{stem}.positions.csv", pd.DataFrame({"position": np.arange(1, positions.size + 1), "saliency": positions}))
        barcode_chart(out / f"{stem}.barcode.svg", positions, f"{config.task}: saliency per permutation position")
        logger.info("✅ Saliency end/interior ratio %.3f", ratio)
    else:
        logger.info("✅ Most salient inputs: %s", top_components(values))

    if check:
        if TaskKind(config.task) is TaskKind.REAL_VS_FAKE:
            logger.warning("⚠️ No saliency acceptance pattern for %s", config.task)
        enforce(saliency_failures(config.task, values, positions, ratio), f"{config.task} saliency")
