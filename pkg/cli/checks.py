# cli/checks.py
"""Known results used by the --check flags."""
from typing import Dict, List, Optional, Tuple

import numpy as np

from schemas.algebra import AlgebraKind
from schemas.frequency import FrequencyReport
from schemas.graphs import GraphCensus
from schemas.ml import PCASummary, TaskKind

CLASS_COUNT = 128

# (doublets, quadruplets, octuplets, min multiplicity, max multiplicity, parity)
CENSUS: Dict[AlgebraKind, Tuple[int, int, int, int, int, str]] = {
    AlgebraKind.A8: (8, 26, 1, 1, 1385, "odd"),
    AlgebraKind.D8: (20, 22, 0, 2, 1582, "even"),
    AlgebraKind.E8: (58, 3, 0, 3, 1511, "odd"),
}

# (distinct subinvariants, distinct adjacencies, iso classes, repeats, eigenvalue counts for orders 1..4)
GRAPHS: Dict[AlgebraKind, Tuple[int, int, int, Tuple[int, int, int], List[int]]] = {
    AlgebraKind.A8: (513, 219, 88, (0, 38, 12), [36, 34, 18, 11]),
    AlgebraKind.D8: (513, 256, 144, (0, 1, 6), [43, 41, 24, 36]),
    AlgebraKind.E8: (513, 251, 137, (0, 0, 25), [54, 49, 18, 30]),
}

ELBOW_WINDOWS: Dict[AlgebraKind, Tuple[int, int]] = {
    AlgebraKind.A8: (90, 110),
    AlgebraKind.D8: (65, 85),
    AlgebraKind.E8: (90, 110),
}

REAL_VS_FAKE_BAND = (0.85, 0.97)
ACCURACY_TOLERANCE = 0.05
CLASSIFICATION_TAIL = 7


def frequency_failures(report: FrequencyReport) -> List[str]:
    kind = AlgebraKind(report.algebra)
    doublets, quads, octs, lo, hi, parity = CENSUS[kind]
    got = (
        report.census.get("doublet", 0),
        report.census.get("quadruplet", 0),
        report.census.get("octuplet", 0),
        report.min_multiplicity,
        report.max_multiplicity,
        report.parity,
    )
    failures = []
    if report.class_count != CLASS_COUNT:
        failures.append(f"{kind.label}: {report.class_count} classes, expected {CLASS_COUNT}")
    if got != CENSUS[kind]:
        failures.append(f"{kind.label}: census {got}, expected {CENSUS[kind]}")
    return failures


def graph_failures(census: GraphCensus) -> List[str]:
    kind = AlgebraKind(census.algebra)
    subs, adjs, isos, repeats, eigen = GRAPHS[kind]
    failures = []
    got = (census.distinct_subinvariants, census.distinct_adjacencies, census.iso_classes)
    if got != (subs, adjs, isos):
        failures.append(f"{kind.label}: subinvariants/adjacencies/iso classes {got}, expected {(subs, adjs, isos)}")
    r = census.repeats
    if (r.subinvariants, r.adjacencies, r.graphs) != repeats:
        failures.append(f"{kind.label}: repeats {(r.subinvariants, r.adjacencies, r.graphs)}, expected {repeats}")
    if census.eigenvalue_counts != eigen:
        failures.append(f"{kind.label}: eigenvalue counts {census.eigenvalue_counts}, expected {eigen}")
    if not census.all_connected:
        failures.append(f"{kind.label}: disconnected bivector graph")
    if census.smith is None or not (census.smith.dynkin_found and census.smith.only_dynkin_below_two):
        failures.append(f"{kind.label}: spectral radius below 2 not confined to the Dynkin diagram")
    return failures


def pca_failures(summary: PCASummary) -> List[str]:
    kind = AlgebraKind(summary.algebra)
    lo, hi = ELBOW_WINDOWS[kind]
    failures = []
    if not lo <= summary.elbow <= hi:
        failures.append(f"{kind.label}: elbow at {summary.elbow}, expected {lo}..{hi}")
    if not all(summary.mirror_orders_agree):
        failures.append(f"{kind.label}: mirror orders project differently")
    return failures


def training_failures(task: TaskKind, accuracy: float, expect: Optional[float]) -> List[str]:
    if expect is not None:
        if abs(accuracy - expect) > ACCURACY_TOLERANCE:
            return [f"accuracy {accuracy:.4f} not within {ACCURACY_TOLERANCE} of {expect:.4f}"]
        return []
    if TaskKind(task) is TaskKind.REAL_VS_FAKE:
        lo, hi = REAL_VS_FAKE_BAND
        if not lo <= accuracy <= hi:
            return [f"accuracy {accuracy:.4f} outside {lo}..{hi}"]
    return []


def saliency_failures(task: TaskKind, values: np.ndarray, positions: Optional[np.ndarray], end_ratio: Optional[float]) -> List[str]:
    task = TaskKind(task)
    if task is TaskKind.REGRESS and positions is not None:
        if end_ratio is None or end_ratio <= 1.0:
            return [f"end positions carry no more saliency than the interior (ratio {end_ratio})"]
    if task is TaskKind.CLASSIFY_ALGEBRA:
        top = np.argsort(values)[::-1][:3]
        if np.any(top < values.size - CLASSIFICATION_TAIL):
            return [f"top components {top.tolist()} not among the last {CLASSIFICATION_TAIL}"]
    return []
