# cli/pca.py
import logging
from pathlib import Path
from typing import List, Optional

import typer

from analysis.frequency import reduce_to_classes
from analysis.pca import COMBINED, elbow, elbow_frame, mirror_orders_agree, order_panels, projection_frame
from cli.checks import pca_failures
from cli.common import echo_config, enforce, handle_errors, load_datasets, output_dir, resolve_inputs, write_frame
from core.svg import line_chart, scatter_chart
from schemas.ml import PCASummary

logger = logging.getLogger(__name__)

LEADING = 10


@handle_errors
def cmd_pca(
    dataset: List[Path] = typer.Option(..., "--dataset", help="Dataset file(s); repeat for several algebras."),
    dedup: bool = typer.Option(False, "--dedup", help="Fit on the class representatives only."),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory (default: SOCM_OUTPUT_DIR)."),
    check: bool = typer.Option(False, "--check", help="Fail unless the elbow and mirror checks hold."),
):
    """Per-order and combined principal components of the invariants."""
    out = output_dir(out)
    paths = resolve_inputs(dataset)
    datasets = load_datasets(paths)
    echo_config(
        out,
        "pca",
        algebras=list(datasets),
        inputs={d.algebra.value: str(p) for p, d in zip(paths, datasets.values())},
        options={"dedup": dedup, "check": check},
    )

    failures: List[str] = []
    suffix = ".dedup" if dedup else ""
    for kind, d in datasets.items():
        if dedup:
            d = reduce_to_classes(d)
        panels = order_panels(d)
        for name, panel in panels.items():
            stem = f"{kind.value}{suffix}.pca.{name}"
            write_frame(out / f"{stem}.csv", projection_frame(panel))
            scatter_chart(out / f"{stem}.svg", panel.projection, panel.orders, f"{kind.label} {name}: first two components")

        combined = panels[COMBINED].model
        write_frame(out / f"{kind.value}{suffix}.pca.elbow.csv", elbow_frame(combined))
        line_chart(
            out / f"{kind.value}{suffix}.pca.elbow.svg",
            range(1, combined.n_components + 1),
            elbow_frame(combined)["log_ratio"],
            f"{kind.label}: explained variance ratio",
            xlabel="component",
            ylabel="log10 ratio",
        )
        summary = PCASummary(
            algebra=kind,
            dedup=dedup,
            rows=d.rows,
            elbow=elbow(combined),
            order_elbows={name: elbow(panel.model) for name, panel in panels.items() if name != COMBINED},
            mirror_orders_agree=mirror_orders_agree(panels),
            leading_ratios=[float(x) for x in combined.explained_variance_ratio[:LEADING]],
        )
        (out / f"{kind.value}{suffix}.pca.json").write_text(summary.model_dump_json(indent=2) + "\n")
        failures.extend(pca_failures(summary))
        logger.info("✅ %s PCA written (elbow at %d)", kind.label, summary.elbow)

    if check:
        enforce(failures, "PCA")
