# tasks/sweep.py
"""Exhaustive SOCM sweep over all Coxeter elements of one root system."""
import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from core import exact
from core.config import settings
from core.coxeter import (
    ORDERS,
    SOCM_WIDTH,
    MapMatrix,
    char_poly,
    coxeter_versor,
    frame_products,
    grade_pattern,
    is_unit_versor,
    matrix_of_map,
    reflection_product,
    socm_by_versor,
    socm_from_matrix,
    verify_char_poly_identity,
    verify_invariance,
)
from core.dataset import BLADES, Dataset
from core.euclidean import euclidean_rows, socm_euclidean
from core.exceptions import DatasetError, KernelInvariantError
from core.ga import DIMENSION, blade_grades
from core.root_systems import RootSystem, all_permutations, build_root_system
from schemas.algebra import AlgebraKind, Frame, VerifyLevel
from schemas.sweep import VerificationCheck, VerificationReport

logger = logging.getLogger(__name__)

# Zero coefficients among the 2304 of every SOCM in the orthonormal frame, per algebra.
ZERO_COUNTS: Dict[AlgebraKind, int] = {
    AlgebraKind.A8: 1805,
    AlgebraKind.D8: 2083,
    AlgebraKind.E8: 1942,
}

_MAX_LISTED_FAILURES = 20


def _warm(kind_value: str) -> None:
    rs = build_root_system(AlgebraKind(kind_value))
    frame_products(rs.kind)


def _sweep_chunk(kind_value: str, start: int, stop: int) -> Tuple[int, np.ndarray]:
    rs = build_root_system(AlgebraKind(kind_value))
    perms = all_permutations(DIMENSION)[start:stop]
    out = np.empty((stop - start, SOCM_WIDTH), dtype=np.int64)
    for i, p in enumerate(perms):
        perm = tuple(int(x) for x in p)
        out[i] = socm_from_matrix(rs, reflection_product(rs, perm), perm).coefficients()
    logger.info("🔄 %s ranks %d..%d done", rs.kind.label, start, stop - 1)
    return start, out


def chunk_ranges(total: int, chunk_size: int) -> List[Tuple[int, int]]:
    chunk_size = max(1, chunk_size)
    return [(lo, min(lo + chunk_size, total)) for lo in range(0, total, chunk_size)]


def full_sweep(rs: RootSystem, workers: Optional[int] = None, chunk_size: Optional[int] = None) -> Dataset:
    """SOCMs of all 8! Coxeter elements, merged in permutation-rank order."""
    workers = workers or settings.socm_workers
    chunk_size = chunk_size or settings.socm_chunk_size
    perms = all_permutations(DIMENSION)
    total = perms.shape[0]
    ranges = chunk_ranges(total, chunk_size)
    socm = np.empty((total, SOCM_WIDTH), dtype=np.int64)

    logger.info("🔄 Sweeping %s: %d permutations, %d chunks, %d workers", rs.kind.label, total, len(ranges), workers)
    if workers <= 1:
        _warm(rs.kind.value)
        results: Iterable[Tuple[int, np.ndarray]] = (_sweep_chunk(rs.kind.value, lo, hi) for lo, hi in ranges)
        for i, (start, block) in enumerate(results, 1):
            socm[start:start + block.shape[0]] = block
            logger.debug("%s chunk %d/%d", rs.kind.label, i, len(ranges))
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=_warm, initargs=(rs.kind.value,)) as pool:
            futures = [pool.submit(_sweep_chunk, rs.kind.value, lo, hi) for lo, hi in ranges]
            for i, future in enumerate(futures, 1):
                start, block = future.result()
                socm[start:start + block.shape[0]] = block
                logger.debug("%s chunk %d/%d", rs.kind.label, i, len(ranges))

    logger.info("✅ %s sweep complete", rs.kind.label)
    return Dataset(rs.kind, perms.copy(), socm)


# -- verification ---------------------------------------------------------------


def _check(name: str, ok: np.ndarray, ranks: np.ndarray, detail: Optional[str] = None) -> VerificationCheck:
    failures = ranks[~ok][:_MAX_LISTED_FAILURES].tolist()
    return VerificationCheck(name=name, passed=bool(ok.all()), checked=int(ok.size), failures=failures, detail=detail)


def map_matrices(rs: RootSystem, perms: np.ndarray) -> np.ndarray:
    """Batched reflection products, one integer matrix per permutation."""
    reflections = np.stack([rs.reflection_matrix(i) for i in range(rs.n)])
    mats = np.broadcast_to(np.eye(rs.n, dtype=np.int64), (perms.shape[0], rs.n, rs.n)).copy()
    for t in range(perms.shape[1]):
        mats = reflections[perms[:, t].astype(np.int64)] @ mats
    return mats


def row_checks(rs: RootSystem, d: Dataset) -> List[VerificationCheck]:
    """Identities cheap enough to evaluate on every row."""
    ranks = d.ranks()
    socm = d.socm.astype(np.int64)
    blocks = socm.reshape(d.rows, ORDERS, BLADES)
    grades = blade_grades(DIMENSION)
    checks: List[VerificationCheck] = []

    allowed = grade_pattern()
    pattern_ok = np.ones(d.rows, dtype=bool)
    for r in range(ORDERS):
        forbidden = ~np.isin(grades, allowed[r])
        pattern_ok &= ~np.any(blocks[:, r, forbidden] != 0, axis=1)
    checks.append(_check("grade_pattern", pattern_ok, ranks))

    mirror_ok = np.all(blocks == blocks[:, ::-1, :], axis=(1, 2))
    checks.append(_check("mirror_symmetry", mirror_ok, ranks))

    unit = np.zeros(BLADES, dtype=np.int64)
    unit[0] = 1
    checks.append(_check("inv0_is_one", np.all(blocks[:, 0, :] == unit, axis=1), ranks))

    expected = ZERO_COUNTS[d.algebra]
    try:
        zeros = d.zero_counts()
    except KernelInvariantError as e:
        checks.append(_check("zero_count", np.zeros(d.rows, dtype=bool), ranks, detail=str(e)))
    else:
        checks.append(
            _check("zero_count", zeros == expected, ranks, detail=f"expected {expected}, observed {sorted(set(zeros.tolist()))}")
        )

    mats = map_matrices(rs, d.perms)
    cp = exact.batched_char_poly(mats)
    checks.append(_check("cayley_hamilton", np.all(cp == blocks[:, :, 0], axis=1), ranks))

    power = np.broadcast_to(np.eye(rs.n, dtype=np.int64), mats.shape).copy()
    for _ in range(rs.coxeter_number):
        power = mats @ power
    order_ok = np.all(power == np.eye(rs.n, dtype=np.int64), axis=(1, 2))
    checks.append(_check("coxeter_order", order_ok, ranks, detail=f"f^{rs.coxeter_number} = id"))
    return checks


def _versor_checks(kind_value: str, rank: int, row: Sequence[int]) -> Dict[str, bool]:
    """Identities that need the versor itself, for one permutation."""
    rs = build_root_system(AlgebraKind(kind_value))
    perm = tuple(int(x) for x in all_permutations(DIMENSION)[rank])
    W = coxeter_versor(rs, perm)
    reference = socm_by_versor(rs, perm)
    stored = np.asarray(row, dtype=np.int64)
    M = matrix_of_map(rs, W)
    expected_m = MapMatrix.from_rows(reflection_product(rs, perm))
    cp = char_poly(M)
    scalars = tuple(Fraction(int(stored[r * BLADES])) for r in range(ORDERS))
    sympy_cp = exact.sympy_charpoly(M.entries)
    try:
        converted = euclidean_rows(rs.kind, stored[None, :])[0]
    except KernelInvariantError:
        converted = None
    return {
        "unit_versor": is_unit_versor(W),
        "even_versor": all(k % 2 == 0 for k in W.value.grades()),
        "versor_route_agreement": bool(np.array_equal(reference.coefficients(), stored)),
        "euclidean_route_agreement": converted is not None and bool(np.array_equal(socm_euclidean(rs, perm), converted)),
        "map_matrix_agreement": M == expected_m,
        "map_orthogonal": M.preserves(rs.metric),
        "map_determinant": M.determinant() == 1,
        "char_poly_oracle": cp.coefficients == scalars
        and list(cp.coefficients) == [c if s % 2 == 0 else -c for s, c in enumerate(sympy_cp)],
        "char_poly_identity": all(verify_char_poly_identity(reference, W, a) for a in rs.frame),
        "sandwich_invariance": verify_invariance(W, reference),
    }


def sample_ranks(total: int, samples: int) -> List[int]:
    """Evenly spread ranks, rank 0 always included."""
    if samples >= total:
        return list(range(total))
    picks = np.linspace(0, total - 1, num=max(samples, 1)).round().astype(np.int64)
    return sorted(set([0] + picks.tolist()))


def verify_dataset(
    rs: RootSystem,
    d: Dataset,
    level: VerifyLevel = VerifyLevel.SAMPLED,
    samples: Optional[int] = None,
    workers: int = 1,
) -> VerificationReport:
    level = VerifyLevel(level)
    if d.frame is not Frame.SIMPLE_ROOT:
        raise DatasetError("verification runs on simple-root datasets", frame=d.frame.value)
    if not d.is_complete():
        logger.warning("⚠️ %s dataset is not the complete rank-ordered sweep", d.algebra.label)
    checks = row_checks(rs, d)

    ranks = d.ranks()
    if level is VerifyLevel.EXHAUSTIVE:
        positions = list(range(d.rows))
    else:
        picked = set(sample_ranks(d.rows, samples or settings.socm_verify_samples))
        positions = [i for i in range(d.rows) if i in picked]
    chosen = [int(ranks[i]) for i in positions]
    args = [(rs.kind.value, int(ranks[i]), d.socm[i].tolist()) for i in positions]

    logger.info("🔄 Verifying %s: versor-route identities on %d permutations", rs.kind.label, len(args))
    if workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_versor_checks, *zip(*args)))
    else:
        outcomes = [_versor_checks(*a) for a in args]

    chosen_arr = np.array(chosen, dtype=np.int64)
    if outcomes:
        for name in outcomes[0]:
            ok = np.array([o[name] for o in outcomes], dtype=bool)
            checks.append(_check(name, ok, chosen_arr))

    report = VerificationReport(algebra=rs.kind, level=level, rows=d.rows, sampled_ranks=chosen, checks=checks)
    if report.passed:
        logger.info("✅ %s verification passed (%d checks)", rs.kind.label, len(checks))
    else:
        logger.error("❌ %s verification failed: %s", rs.kind.label, ", ".join(report.failed_checks()))
    return report
