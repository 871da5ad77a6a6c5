# cli/freq.py
import logging
from pathlib import Path
from typing import Optional

import pandas as pd
import typer

from analysis.frequency import class_relations, dedup_classes, render_report, subinvariant_frequencies
from cli.checks import frequency_failures
from cli.common import echo_config, enforce, handle_errors, load_datasets, output_dir, resolve_inputs, write_frame
from core.root_systems import build_root_system
from core.svg import bar_chart
from schemas.algebra import AlgebraKind

logger = logging.getLogger(__name__)


@handle_errors
def cmd_freq(
    dataset: Path = typer.Option(..., "--dataset", help="Dataset file written by sweep."),
    identify_sign: bool = typer.Option(False, "--identify-sign", help="Treat v and -v as the same subinvariant."),
    algebra: Optional[AlgebraKind] = typer.Option(None, "--algebra", help="Algebra when the dataset has no manifest."),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory (default: SOCM_OUTPUT_DIR)."),
    check: bool = typer.Option(False, "--check", help="Fail unless the class census matches the known one."),
):
    """Class multiplicities, their groups and relations, subinvariant frequency tables."""
    out = output_dir(out)
    (path,) = resolve_inputs([dataset])
    (d,) = load_datasets([path], algebra).values()
    echo_config(out, "freq", algebras=[d.algebra], inputs={"dataset": str(path)}, options={"identify_sign": identify_sign, "check": check})

    report = dedup_classes(d, identify_sign)
    report.relations = class_relations(report, build_root_system(d.algebra))
    report.subinvariants = subinvariant_frequencies(d, identify_sign)

    stem = d.algebra.value + (".signed" if identify_sign else "")
    (out / f"{stem}.frequency.json").write_text(report.model_dump_json(indent=2) + "\n")
    (out / f"{stem}.frequency.txt").write_text(render_report(report))
    mults = report.sorted_multiplicities
    write_frame(out / f"{stem}.multiplicities.csv", pd.DataFrame({"rank": range(1, len(mults) + 1), "multiplicity": mults}))
    bar_chart(
        out / f"{stem}.multiplicities.svg",
        mults,
        f"{d.algebra.label}: {report.class_count} classes by multiplicity",
        xlabel="class",
        ylabel="multiplicity",
    )
    logger.info("✅ %s: %d classes written to %s", d.algebra.label, report.class_count, out)
    if check:
        enforce(frequency_failures(report), f"{d.algebra.label} frequencies")
