# cli/graphs.py
import logging
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd
import typer

from analysis.frequency import reduce_to_classes
from analysis.graphs import (
    centrality_histograms,
    eigenvalue_census,
    graph_census,
    histogram,
    random_connected_baseline,
    shared_subinvariants,
)
from cli.checks import graph_failures
from cli.common import echo_config, enforce, handle_errors, load_datasets, output_dir, resolve_inputs, write_frame
from core.config import settings
from core.svg import histogram_chart
from schemas.graphs import GraphsSummary, HistogramBin

logger = logging.getLogger(__name__)

BASELINE_BINS = 70


def _bins_frame(bins: List[HistogramBin]) -> pd.DataFrame:
    return pd.DataFrame([b.model_dump() for b in bins], columns=["bin_left", "bin_right", "count", "order", "algebra"])


def _by_order(bins: List[HistogramBin]) -> Dict[str, list]:
    series: Dict[str, list] = {}
    for b in bins:
        series.setdefault("random" if b.order is None else f"Inv_{b.order}", []).append((b.bin_left, b.bin_right, b.count))
    return series


def _emit(out: Path, stem: str, bins: List[HistogramBin], title: str, xlabel: str) -> None:
    write_frame(out / f"{stem}.csv", _bins_frame(bins))
    histogram_chart(out / f"{stem}.svg", _by_order(bins), title, xlabel=xlabel)


@handle_errors
def cmd_graphs(
    dataset: List[Path] = typer.Option(..., "--dataset", help="Dataset file(s); repeat for several algebras."),
    baseline: int = typer.Option(0, "--baseline", min=0, help="Random connected graphs for the spectral baseline."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Baseline RNG seed (default: SOCM_SEED)."),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory (default: SOCM_OUTPUT_DIR)."),
    check: bool = typer.Option(False, "--check", help="Fail unless the graph census matches the known one."),
):
    """Bivector graphs: census, spectra, centrality and the random baseline."""
    out = output_dir(out)
    seed = settings.socm_seed if seed is None else seed
    paths = resolve_inputs(dataset)
    datasets = load_datasets(paths)
    echo_config(
        out,
        "graphs",
        algebras=list(datasets),
        seed=seed,
        inputs={d.algebra.value: str(p) for p, d in zip(paths, datasets.values())},
        options={"baseline": baseline, "check": check},
    )

    summary = GraphsSummary()
    failures: List[str] = []
    for kind, d in datasets.items():
        reduced = reduce_to_classes(d)
        eigen = eigenvalue_census(reduced)
        census = graph_census(reduced, eigen)
        summary.censuses.append(census)
        failures.extend(graph_failures(census))

        _emit(out, f"{kind.value}.eigenvalues", eigen.histogram, f"{kind.label}: maximum eigenvalues", "maximum eigenvalue")
        nodes, variances = centrality_histograms(reduced)
        _emit(out, f"{kind.value}.central_nodes", nodes, f"{kind.label}: most central node", "node")
        _emit(out, f"{kind.value}.centrality_variance", variances, f"{kind.label}: centrality variance", "variance")

    if len(datasets) > 1:
        summary.shared_between_algebras = shared_subinvariants(datasets)
    if baseline:
        values, summary.baseline = random_connected_baseline(baseline, seed)
        bins = histogram(values, BASELINE_BINS, (0.0, 7.0))
        _emit(out, "baseline.eigenvalues", bins, "Random connected graphs: maximum eigenvalues", "maximum eigenvalue")

    (out / "graphs_summary.json").write_text(summary.model_dump_json(indent=2) + "\n")
    logger.info("✅ Graph analysis written to %s", out)
    if check:
        enforce(failures, "graph census")
