# analysis/frequency.py
"""SOCM classes, their multiplicity groups and relations, subinvariant frequencies."""
import logging
from collections import defaultdict
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np
from tabulate import tabulate

from core.coxeter import EVEN_GRADES, ORDERS, grade_pattern
from core.dataset import Dataset
from core.exceptions import VerificationFailed
from core.root_systems import RootSystem, all_permutations, barcode_bits, build_root_system, permutation_ranks
from schemas.frequency import (
    GRADE_NAMES,
    ClassGroup,
    ClassRelations,
    FrequencyReport,
    GroupKind,
    SocmClass,
    SubinvariantTable,
)

logger = logging.getLogger(__name__)

GROUP_SIZES = {2: GroupKind.DOUBLET, 4: GroupKind.QUADRUPLET, 8: GroupKind.OCTUPLET}
FLIP = 0xFF


def sign_canonical(rows: np.ndarray) -> np.ndarray:
    """Representative of {v, -v} whose first non-zero entry is positive."""
    rows = np.asarray(rows)
    if rows.size == 0:
        return rows
    first = np.argmax(rows != 0, axis=1)
    lead = rows[np.arange(rows.shape[0]), first]
    sign = np.where(lead < 0, -1, 1).astype(rows.dtype)
    return rows * sign[:, None]


def barcode_string(bits: int, width: int = 8) -> str:
    return "".join("B" if bits >> p & 1 else "W" for p in range(width))


def _colour_changes(bits: np.ndarray, width: int = 8) -> np.ndarray:
    diff = (bits ^ (bits >> 1)) & ((1 << (width - 1)) - 1)
    return np.array([bin(int(x)).count("1") for x in diff])


def _class_labels(socm: np.ndarray, ranks: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Class label per row, classes numbered by their smallest member rank."""
    _, inverse, counts = np.unique(socm, axis=0, return_inverse=True, return_counts=True)
    inverse = np.asarray(inverse).ravel()
    first = np.full(counts.size, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(first, inverse, ranks)
    order = np.argsort(first, kind="stable")
    relabel = np.empty(counts.size, dtype=np.int64)
    relabel[order] = np.arange(counts.size)
    return relabel[inverse], counts[order]


def class_representatives(d: Dataset) -> np.ndarray:
    """Row index of the smallest-rank member of each class, in class-id order."""
    ranks = d.ranks()
    labels, _ = _class_labels(d.socm, ranks)
    by_rank = np.argsort(ranks, kind="stable")
    _, first = np.unique(labels[by_rank], return_index=True)
    return by_rank[first]


def reduce_to_classes(d: Dataset) -> Dataset:
    """The 128-row dataset of class representatives."""
    reps = class_representatives(d)
    return Dataset(d.algebra, d.perms[reps], d.socm[reps])


def dedup_classes(d: Dataset, identify_sign: bool = False) -> FrequencyReport:
    """Group rows with identical 2304-vectors into classes."""
    rs = build_root_system(d.algebra)
    ranks = d.ranks()
    labels, counts = _class_labels(d.socm, ranks)
    bits = barcode_bits(rs, d.perms)
    changes = _colour_changes(bits)

    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(counts.size + 1))
    classes: List[SocmClass] = []
    for cid in range(counts.size):
        members = order[bounds[cid]:bounds[cid + 1]]
        members = members[np.argsort(ranks[members])]
        rep = members[0]
        classes.append(
            SocmClass(
                class_id=cid,
                representative_rank=int(ranks[rep]),
                representative_perm=[int(x) for x in d.perms[rep]],
                multiplicity=int(members.size),
                member_ranks=[int(r) for r in ranks[members]],
                barcodes=sorted({barcode_string(int(b)) for b in bits[members]}),
                bipartite_members=int(np.count_nonzero(changes[members] == 1)),
            )
        )

    preserved: Optional[bool] = None
    if identify_sign:
        _, signed_counts = _class_labels(sign_canonical(d.socm), ranks)
        preserved = sorted(signed_counts.tolist()) == sorted(counts.tolist())
        if not preserved:
            raise VerificationFailed(
                "sign identification changed the full-SOCM classes",
                algebra=d.algebra.label,
                classes=counts.size,
                signed_classes=signed_counts.size,
            )

    mults = sorted((c.multiplicity for c in classes), reverse=True)
    parities = {m % 2 for m in mults}
    report = FrequencyReport(
        algebra=d.algebra,
        identify_sign=identify_sign,
        total=d.rows,
        class_count=len(classes),
        classes=classes,
        min_multiplicity=min(mults) if mults else 0,
        max_multiplicity=max(mults) if mults else 0,
        parity="mixed" if len(parities) > 1 else ("odd" if parities == {1} else "even"),
        sorted_multiplicities=mults,
        sign_identification_preserved=preserved,
    )
    inv_partner, _, bw_partner = _partners(report, rs)
    report.groups = group_classes(report, inv_partner, bw_partner)
    report.census = {kind.value: sum(1 for g in report.groups if g.kind == kind.value) for kind in GroupKind}
    logger.info(
        "✅ %s: %d classes, census %s, multiplicities %d..%d",
        d.algebra.label, report.class_count, report.census, report.min_multiplicity, report.max_multiplicity,
    )
    return report


def _partners(report: FrequencyReport, rs: RootSystem) -> Tuple[Dict[int, int], bool, Dict[int, int]]:
    perms = all_permutations(rs.n)
    rank_to_class: Dict[int, int] = {}
    for c in report.classes:
        for r in c.member_ranks:
            rank_to_class[r] = c.class_id

    inv_partner: Dict[int, int] = {}
    consistent = True
    for c in report.classes:
        member_perms = perms[np.asarray(c.member_ranks, dtype=np.int64)]
        reversed_ranks = permutation_ranks(member_perms[:, ::-1])
        targets = {rank_to_class.get(int(r)) for r in reversed_ranks}
        targets.discard(None)
        if len(targets) == 1:
            inv_partner[c.class_id] = targets.pop()
        elif len(targets) > 1:
            consistent = False

    by_barcodes: Dict[frozenset, int] = {}
    barcode_sets: Dict[int, frozenset] = {}
    for c in report.classes:
        member_perms = perms[np.asarray(c.member_ranks, dtype=np.int64)]
        key = frozenset(int(b) for b in barcode_bits(rs, member_perms))
        barcode_sets[c.class_id] = key
        by_barcodes.setdefault(key, c.class_id)
    bw_partner: Dict[int, int] = {}
    for cid, key in barcode_sets.items():
        flipped = frozenset(b ^ FLIP for b in key)
        if flipped in by_barcodes:
            bw_partner[cid] = by_barcodes[flipped]
    return inv_partner, consistent, bw_partner


def group_classes(report: FrequencyReport, inv_partner: Dict[int, int], bw_partner: Dict[int, int]) -> List[ClassGroup]:
    """Classes sharing a multiplicity form a group; other tie sizes split by relation connectivity."""
    by_mult: Dict[int, List[int]] = defaultdict(list)
    for c in report.classes:
        by_mult[c.multiplicity].append(c.class_id)

    groups: List[ClassGroup] = []
    for mult in sorted(by_mult):
        ids = sorted(by_mult[mult])
        if len(ids) in GROUP_SIZES:
            parts = [ids]
        else:
            graph = nx.Graph()
            graph.add_nodes_from(ids)
            for i in ids:
                for partner in (inv_partner.get(i), bw_partner.get(i)):
                    if partner is not None and partner in by_mult[mult] and partner != i:
                        graph.add_edge(i, partner)
            parts = sorted((sorted(comp) for comp in nx.connected_components(graph)), key=lambda p: p[0])
        for part in parts:
            members = set(part)
            groups.append(
                ClassGroup(
                    multiplicity=mult,
                    kind=GROUP_SIZES.get(len(part), GroupKind.OTHER),
                    class_ids=part,
                    inversion_closed=all(inv_partner.get(i) in members for i in part),
                    bw_closed=all(bw_partner.get(i) in members for i in part),
                )
            )
    return groups


def class_relations(report: FrequencyReport, rs: RootSystem) -> ClassRelations:
    """Inversion and B↔W relations between classes, summarised per group."""
    inv_partner, consistent, bw_partner = _partners(report, rs)
    doublets = [g for g in report.groups if g.kind == GroupKind.DOUBLET.value]

    def paired(g: ClassGroup) -> bool:
        a, b = g.class_ids
        return inv_partner.get(a) == b and inv_partner.get(b) == a

    def bw_self_dual(g: ClassGroup) -> bool:
        codes = {code for cid in g.class_ids for code in report.classes[cid].barcodes}
        flipped = {"".join("W" if ch == "B" else "B" for ch in code) for code in codes}
        return codes == flipped

    def representative(cid: int, prefer_bipartite: bool) -> List[int]:
        c = report.classes[cid]
        if prefer_bipartite and c.bipartite_members:
            perms = all_permutations(rs.n)
            for r in c.member_ranks:
                bits = int(barcode_bits(rs, perms[r:r + 1])[0])
                if bin((bits ^ (bits >> 1)) & 0x7F).count("1") == 1:
                    return [int(x) for x in perms[r]]
        return c.representative_perm

    relations = ClassRelations(
        inversion_partner=inv_partner,
        inversion_consistent=consistent,
        bw_partner=bw_partner,
        doublets_inversion_related=bool(doublets) and all(paired(g) for g in doublets),
        doublets_bw_self_dual=bool(doublets) and all(bw_self_dual(g) for g in doublets),
        bw_symmetry_present=any(bw_partner.get(i) is not None for i in range(report.class_count)),
    )
    if doublets:
        lo = min(doublets, key=lambda g: g.multiplicity)
        hi = max(doublets, key=lambda g: g.multiplicity)
        relations.min_doublet_representatives = [representative(c, False) for c in lo.class_ids]
        relations.max_doublet_representatives = [representative(c, True) for c in hi.class_ids]
        relations.max_doublet_bipartite = all(report.classes[c].bipartite_members > 0 for c in hi.class_ids)
    if not consistent:
        relations.notes.append("inversion maps some class onto more than one class")
    if not relations.bw_symmetry_present:
        relations.notes.append("no B<->W symmetry between classes")
    return relations


def subinvariant_frequencies(d: Dataset, identify_sign: bool = False) -> SubinvariantTable:
    """Distinct non-zero coefficient vectors per (order, grade) cell."""
    allowed = grade_pattern()
    counts: List[List[Optional[int]]] = []
    for r in range(ORDERS):
        row: List[Optional[int]] = []
        for k in EVEN_GRADES:
            if k not in allowed[r]:
                row.append(None)
                continue
            block = d.subinvariant_block(r, k)
            block = block[np.any(block != 0, axis=1)]
            if identify_sign:
                block = sign_canonical(block)
            row.append(int(np.unique(block, axis=0).shape[0]) if block.size else 0)
        counts.append(row)
    return SubinvariantTable(algebra=d.algebra, identify_sign=identify_sign, counts=counts)


# -- text rendering -------------------------------------------------------------


def render_subinvariant_table(table: SubinvariantTable) -> str:
    headers = ["order"] + [GRADE_NAMES[k] for k in table.grades]
    rows = [[f"Inv_{r}"] + ["" if c is None else c for c in counts] for r, counts in enumerate(table.counts)]
    title = f"{str(table.algebra).upper()} subinvariant frequencies" + (" (up to sign)" if table.identify_sign else "")
    return title + "\n" + tabulate(rows, headers=headers, tablefmt="github")


def render_report(report: FrequencyReport) -> str:
    lines = [
        f"{str(report.algebra).upper()}: {report.class_count} classes from {report.total} permutations",
        f"multiplicities {report.min_multiplicity}..{report.max_multiplicity}, all {report.parity}",
        "groups: " + ", ".join(f"{n} {kind}s" for kind, n in report.census.items() if n),
    ]
    group_rows = [[g.multiplicity, g.kind, " ".join(map(str, g.class_ids)), g.inversion_closed, g.bw_closed] for g in report.groups]
    lines.append(tabulate(group_rows, headers=["multiplicity", "group", "classes", "inversion", "B<->W"], tablefmt="github"))
    if report.relations is not None:
        rel = report.relations
        lines.append(f"doublets related by inversion: {rel.doublets_inversion_related}")
        lines.append(f"doublets self-dual under B<->W: {rel.doublets_bw_self_dual}")
        if rel.min_doublet_representatives:
            lines.append(f"lowest doublet: {rel.min_doublet_representatives}")
            lines.append(f"highest doublet: {rel.max_doublet_representatives} (bipartite: {rel.max_doublet_bipartite})")
        lines.extend(rel.notes)
    if report.subinvariants is not None:
        lines.append("")
        lines.append(render_subinvariant_table(report.subinvariants))
    return "\n".join(lines) + "\n"
