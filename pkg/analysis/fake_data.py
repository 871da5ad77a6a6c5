# analysis/fake_data.py
"""Synthetic SOCM-shaped rows drawn from per-component empirical distributions.

Sampling happens in the orthonormal frame, where the real rows of an algebra
share one zero count; fakes are kept only when they hit it too.
"""
import logging
from typing import List, Optional, Set

import numpy as np

from core.config import settings
from core.dataset import Dataset, compact_integers
from core.exceptions import FakeDataError

logger = logging.getLogger(__name__)

DEFAULT_BATCH = 4096
DEFAULT_MAX_DRAWS = 50_000_000


class ComponentSampler:
    """Independent inverse-CDF sampling of every column from its observed values."""

    def __init__(self, socm: np.ndarray):
        socm = np.asarray(socm)
        self.width = socm.shape[1]
        self.constant = np.all(socm == socm[0], axis=0)
        self.base = socm[0].astype(np.int64)
        self.varying = np.flatnonzero(~self.constant)
        self.values: List[np.ndarray] = []
        self.cdfs: List[np.ndarray] = []
        for j in self.varying:
            values, counts = np.unique(socm[:, j], return_counts=True)
            self.values.append(values.astype(np.int64))
            cdf = np.cumsum(counts) / counts.sum()
            cdf[-1] = 1.0
            self.cdfs.append(cdf)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        out = np.tile(self.base, (n, 1))
        u = rng.random((n, self.varying.size))
        for col, (j, values, cdf) in enumerate(zip(self.varying, self.values, self.cdfs)):
            out[:, j] = values[np.searchsorted(cdf, u[:, col], side="right").clip(max=values.size - 1)]
        return out


def fake_data(
    d: Dataset,
    n: int,
    seed: Optional[int] = None,
    exclude: Optional[Set[bytes]] = None,
    batch: int = DEFAULT_BATCH,
    max_draws: int = DEFAULT_MAX_DRAWS,
) -> np.ndarray:
    """``n`` unique orthonormal-frame fake rows with the real rows' zero count, none equal to a real row."""
    seed = settings.socm_seed if seed is None else seed
    rng = np.random.default_rng(seed)
    real = d.to_euclidean().socm.astype(np.int64)
    counts = np.unique((real == 0).sum(axis=1))
    if counts.size != 1:
        raise FakeDataError("real rows do not share one zero count", algebra=d.algebra.label, counts=counts.tolist())
    zeros = int(counts[0])
    sampler = ComponentSampler(real)
    seen: Set[bytes] = {row.tobytes() for row in np.unique(real, axis=0)}
    if exclude:
        seen |= exclude

    accepted: List[np.ndarray] = []
    drawn = 0
    while len(accepted) < n:
        if drawn >= max_draws:
            raise FakeDataError(
                "could not reach the requested number of fake rows",
                algebra=d.algebra.label,
                requested=n,
                accepted=len(accepted),
                drawn=drawn,
                acceptance=f"{len(accepted) / max(drawn, 1):.2e}",
            )
        rows = sampler.sample(rng, batch)
        drawn += batch
        rows = rows[(rows == 0).sum(axis=1) == zeros]
        for row in rows:
            key = row.tobytes()
            if key in seen:
                continue
            seen.add(key)
            accepted.append(row)
            if len(accepted) == n:
                break
    logger.info("✅ %s: %d fake rows from %d draws", d.algebra.label, n, drawn)
    if not accepted:
        return np.zeros((0, sampler.width), dtype=np.int16)
    return compact_integers(np.stack(accepted))
