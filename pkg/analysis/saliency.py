# analysis/saliency.py
"""Input-gradient saliency of trained networks."""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

import numpy as np
import torch

from analysis.mlp import MLP, Mode, ONE_HOT_WIDTH, mlp_train, train_test_split
from analysis.training import TEST_FRACTION, TaskData
from core.ga import DIMENSION
from schemas.ml import TrainingConfig

logger = logging.getLogger(__name__)


def gradient_saliency(model: MLP, X: np.ndarray, mode: Mode, targets: Optional[np.ndarray] = None) -> np.ndarray:
    """Mean |d output / d input| over the rows of ``X``.

    Classification differentiates the true-class logit; regression the
    Euclidean norm of the output vector.
    """
    model.eval()
    inputs = torch.as_tensor(np.asarray(X, dtype=np.float32)).clone().requires_grad_(True)
    model.zero_grad()
    out = model(inputs)
    if Mode(mode) is Mode.CLASSIFICATION:
        labels = torch.as_tensor(np.asarray(targets, dtype=np.int64))
        selected = out.gather(1, labels[:, None]).sum()
    else:
        selected = out.norm(dim=1).sum()
    (grad,) = torch.autograd.grad(selected, inputs)
    return grad.abs().mean(dim=0).detach().numpy().astype(np.float64)


def position_barcode(saliency: np.ndarray) -> np.ndarray:
    """Sum the eight root slots of each permutation position."""
    saliency = np.asarray(saliency)
    if saliency.size != ONE_HOT_WIDTH:
        raise ValueError(f"expected {ONE_HOT_WIDTH} one-hot saliencies, got {saliency.size}")
    return saliency.reshape(DIMENSION, DIMENSION).sum(axis=1)


def _one_run(config: TrainingConfig, X: np.ndarray, y: np.ndarray, mode: Mode, run: int, output_dim: Optional[int]) -> np.ndarray:
    seed = config.seed + run
    train, test = train_test_split(len(X), TEST_FRACTION, seed)
    trained = mlp_train(config.model_copy(update={"seed": seed}), X[train], y[train], mode, output_dim)
    return gradient_saliency(trained.model, X[test], mode, y[test])


def repeated_saliency(config: TrainingConfig, data: TaskData, runs: Optional[int] = None) -> np.ndarray:
    """Saliency averaged over independently reshuffled 80/20 train/test splits."""
    runs = runs or config.saliency_runs
    output_dim = None if data.mode is Mode.REGRESSION else int(data.y.max()) + 1
    logger.info("🔄 Saliency over %d reshuffled splits", runs)
    if config.workers > 1 and runs > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_one_run, config, data.X, data.y, data.mode, r, output_dim) for r in range(runs)]
            maps: List[np.ndarray] = [f.result() for f in futures]
    else:
        maps = [_one_run(config, data.X, data.y, data.mode, r, output_dim) for r in range(runs)]
    return np.mean(maps, axis=0)


def end_mass_ratio(barcode: np.ndarray) -> float:
    """Mean saliency of the two end positions over the mean of the interior ones."""
    barcode = np.asarray(barcode, dtype=np.float64)
    interior = barcode[1:-1].mean()
    return float(barcode[[0, -1]].mean() / interior) if interior > 0 else float("inf")


def top_components(saliency: np.ndarray, k: int = 3) -> List[int]:
    return [int(i) for i in np.argsort(saliency)[::-1][:k]]
