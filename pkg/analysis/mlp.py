# analysis/mlp.py
"""Dense ReLU networks trained with Adam, rounded-accuracy evaluation and k-fold CV."""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import torch
from torch import nn
from torch.utils.data import DataLoader, TensorDataset

from core.config import settings
from core.exceptions import TrainingDivergedError
from core.ga import DIMENSION
from schemas.ml import CVResult, EpochMetrics, FoldResult, TrainingConfig

logger = logging.getLogger(__name__)

ONE_HOT_WIDTH = DIMENSION * DIMENSION
PLATEAU_TOL = 1e-6


class Mode(str, Enum):
    REGRESSION = "regression"
    CLASSIFICATION = "classification"


class MLP(nn.Module):
    """Linear layers with ReLU between them; the head is linear (logits for classification)."""

    def __init__(self, input_dim: int, hidden: Sequence[int], output_dim: int):
        super().__init__()
        widths = [input_dim, *hidden, output_dim]
        layers: List[nn.Module] = []
        for i, (w_in, w_out) in enumerate(zip(widths[:-1], widths[1:])):
            layers.append(nn.Linear(w_in, w_out))
            if i < len(widths) - 2:
                layers.append(nn.ReLU())
        self.net = nn.Sequential(*layers)
        self.input_dim = input_dim
        self.output_dim = output_dim

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.net(x)

    def layers(self) -> Iterator[Tuple[torch.Tensor, torch.Tensor, str]]:
        """(weight, bias, activation) per dense layer."""
        modules = list(self.net)
        for i, m in enumerate(modules):
            if isinstance(m, nn.Linear):
                follows = modules[i + 1] if i + 1 < len(modules) else None
                yield m.weight, m.bias, "relu" if isinstance(follows, nn.ReLU) else "identity"


def one_hot_permutations(perms: np.ndarray) -> np.ndarray:
    """Slot 8*position + root is 1; 64 inputs per permutation."""
    perms = np.asarray(perms, dtype=np.int64)
    out = np.zeros((perms.shape[0], ONE_HOT_WIDTH), dtype=np.float32)
    rows = np.repeat(np.arange(perms.shape[0]), DIMENSION)
    cols = (np.arange(DIMENSION) * DIMENSION + perms).ravel()
    out[rows, cols] = 1.0
    return out


def seed_everything(seed: int) -> torch.Generator:
    torch.manual_seed(seed)
    torch.set_num_threads(max(1, settings.socm_torch_threads))
    generator = torch.Generator()
    generator.manual_seed(seed)
    return generator


def _loss_fn(mode: Mode) -> nn.Module:
    return nn.MSELoss() if Mode(mode) is Mode.REGRESSION else nn.CrossEntropyLoss()


def _targets(y: np.ndarray, mode: Mode) -> torch.Tensor:
    if Mode(mode) is Mode.REGRESSION:
        return torch.as_tensor(np.asarray(y, dtype=np.float32).reshape(len(y), -1))
    return torch.as_tensor(np.asarray(y, dtype=np.int64))


@dataclass
class TrainedModel:
    model: MLP
    mode: Mode
    history: List[EpochMetrics] = field(default_factory=list)


def mlp_train(config: TrainingConfig, X: np.ndarray, y: np.ndarray, mode: Mode, output_dim: Optional[int] = None) -> TrainedModel:
    """Minibatch Adam on MSE (regression) or log-loss (classification), stopped on a loss plateau."""
    mode = Mode(mode)
    generator = seed_everything(config.seed)
    inputs = torch.as_tensor(np.asarray(X, dtype=np.float32))
    targets = _targets(y, mode)
    if output_dim is None:
        output_dim = targets.shape[1] if mode is Mode.REGRESSION else int(targets.max().item()) + 1
    model = MLP(inputs.shape[1], config.hidden, output_dim)
    optimiser = torch.optim.Adam(model.parameters(), lr=config.learning_rate, betas=(0.9, 0.999), eps=1e-8)
    loss_fn = _loss_fn(mode)
    loader = DataLoader(TensorDataset(inputs, targets), batch_size=config.batch_size, shuffle=True, generator=generator)

    history: List[EpochMetrics] = []
    best = math.inf
    stale = 0
    for epoch in range(1, config.epochs + 1):
        model.train()
        total = 0.0
        for xb, yb in loader:
            optimiser.zero_grad()
            loss = loss_fn(model(xb), yb)
            if not torch.isfinite(loss):
                raise TrainingDivergedError("non-finite training loss", epoch=epoch, loss=float(loss.item()))
            loss.backward()
            optimiser.step()
            total += float(loss.item()) * xb.shape[0]
        epoch_loss = total / len(loader.dataset)
        history.append(EpochMetrics(epoch=epoch, loss=epoch_loss))
        logger.debug("epoch %d loss %.6g", epoch, epoch_loss)
        if epoch_loss < best - PLATEAU_TOL:
            best = epoch_loss
            stale = 0
        else:
            stale += 1
            if stale >= config.patience:
                logger.info("🔄 Loss plateaued at epoch %d (%.6g)", epoch, epoch_loss)
                break
    model.eval()
    return TrainedModel(model, mode, history)


def predict(model: MLP, X: np.ndarray) -> np.ndarray:
    model.eval()
    with torch.no_grad():
        return model(torch.as_tensor(np.asarray(X, dtype=np.float32))).numpy()


def evaluate(model: MLP, X: np.ndarray, y: np.ndarray, mode: Mode) -> float:
    """Rounded regression counts a row only if every coefficient matches; classification is argmax."""
    if len(X) == 0:
        return 0.0
    out = predict(model, X)
    if Mode(mode) is Mode.REGRESSION:
        truth = np.asarray(y, dtype=np.float64).reshape(len(y), -1)
        correct = np.all(np.rint(out) == np.rint(truth), axis=1)
    else:
        correct = out.argmax(axis=1) == np.asarray(y)
    return float(np.mean(correct))


# -- splits ---------------------------------------------------------------------


def kfold_indices(n: int, k: int, seed: int) -> List[np.ndarray]:
    """Test-fold row indices; the folds partition 0..n-1."""
    if k < 2:
        raise ValueError("k-fold needs k >= 2")
    order = np.random.default_rng(seed).permutation(n)
    return [np.sort(f) for f in np.array_split(order, k)]


def train_test_split(n: int, test_fraction: float, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    order = np.random.default_rng(seed).permutation(n)
    cut = int(round(n * test_fraction))
    return np.sort(order[cut:]), np.sort(order[:cut])


def _run_fold(config: TrainingConfig, X: np.ndarray, y: np.ndarray, mode: Mode, fold: int, test: np.ndarray, output_dim: Optional[int]) -> FoldResult:
    mask = np.ones(len(X), dtype=bool)
    mask[test] = False
    fold_config = config.model_copy(update={"seed": config.seed + fold})
    trained = mlp_train(fold_config, X[mask], y[mask], mode, output_dim)
    accuracy = evaluate(trained.model, X[test], y[test], mode)
    logger.info("✅ Fold %d: accuracy %.4f after %d epochs", fold, accuracy, len(trained.history))
    return FoldResult(
        fold=fold,
        accuracy=accuracy,
        train_rows=int(mask.sum()),
        test_rows=int(test.size),
        epochs_run=len(trained.history),
        history=trained.history,
    )


def kfold_cv(config: TrainingConfig, X: np.ndarray, y: np.ndarray, mode: Mode, k: Optional[int] = None) -> CVResult:
    k = k or config.folds
    X = np.asarray(X)
    y = np.asarray(y)
    output_dim = None if Mode(mode) is Mode.REGRESSION else int(np.max(y)) + 1
    folds = kfold_indices(len(X), k, config.seed)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=min(config.workers, k)) as pool:
            futures = [pool.submit(_run_fold, config, X, y, mode, i, test, output_dim) for i, test in enumerate(folds)]
            results = [f.result() for f in futures]
    else:
        results = [_run_fold(config, X, y, mode, i, test, output_dim) for i, test in enumerate(folds)]
    return CVResult(folds=results, mean_accuracy=float(np.mean([r.accuracy for r in results])))


# -- persistence ----------------------------------------------------------------


def save_model(path, trained: TrainedModel, config: TrainingConfig, test_index: Sequence[int], inputs: dict) -> None:
    torch.save(
        {
            "config": config.model_dump(),
            "state_dict": trained.model.state_dict(),
            "input_dim": trained.model.input_dim,
            "output_dim": trained.model.output_dim,
            "test_index": [int(i) for i in test_index],
            "task": config.task,
            "mode": trained.mode.value,
            "inputs": inputs,
        },
        path,
    )


def load_model(path) -> Tuple[MLP, dict]:
    payload = torch.load(path, map_location="cpu", weights_only=False)
    config = TrainingConfig(**payload["config"])
    model = MLP(payload["input_dim"], config.hidden, payload["output_dim"])
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, payload
