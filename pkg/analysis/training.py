# analysis/training.py
"""Inputs and targets for the three learning tasks."""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from analysis.fake_data import fake_data
from analysis.frequency import class_representatives
from analysis.mlp import Mode, evaluate, kfold_cv, mlp_train, one_hot_permutations, train_test_split, TrainedModel
from core.dataset import Dataset
from core.exceptions import DatasetError
from schemas.algebra import AlgebraKind
from schemas.ml import CVResult, TaskKind, TrainingConfig, TrainingSummary

logger = logging.getLogger(__name__)

ALGEBRA_ORDER = (AlgebraKind.A8, AlgebraKind.D8, AlgebraKind.E8)
TEST_FRACTION = 0.2


@dataclass
class TaskData:
    X: np.ndarray
    y: np.ndarray
    mode: Mode
    X_test: Optional[np.ndarray] = None
    y_test: Optional[np.ndarray] = None


def target_block(d: Dataset, order: int, grade: Optional[int]) -> np.ndarray:
    """Coefficients of one subinvariant, or of the whole invariant when ``grade`` is None."""
    if grade is None:
        return d.order_block(order)
    return d.subinvariant_block(order, grade)


def regression_data(d: Dataset, order: int, grade: Optional[int]) -> TaskData:
    X = one_hot_permutations(d.perms)
    y = target_block(d, order, grade).astype(np.float32)
    return TaskData(X, y, Mode.REGRESSION)


def _pick(datasets: Dict[AlgebraKind, Dataset], needed=ALGEBRA_ORDER) -> List[Dataset]:
    missing = [k.label for k in needed if k not in datasets]
    if missing:
        raise DatasetError("datasets missing for " + ", ".join(missing))
    return [datasets[k] for k in needed]


def algebra_classification_data(
    datasets: Dict[AlgebraKind, Dataset], order: int, grade: Optional[int], augment: bool = False
) -> TaskData:
    """Class-reduced subinvariant vectors labelled 0/1/2 for A8/D8/E8."""
    xs, ys = [], []
    for label, d in enumerate(_pick(datasets)):
        reps = class_representatives(d)
        block = target_block(d, order, grade)
        if augment:
            rows = np.arange(d.rows)
        else:
            rows = reps
        xs.append(block[rows].astype(np.float32))
        ys.append(np.full(rows.size, label, dtype=np.int64))
    return TaskData(np.concatenate(xs), np.concatenate(ys), Mode.CLASSIFICATION)


def real_vs_fake_data(datasets: Dict[AlgebraKind, Dataset], target: AlgebraKind, fakes_per_algebra: int, seed: int) -> TaskData:
    """Target algebra's real classes against the other reals and every fake.

    Rows are taken in the orthonormal frame, where every real row of an algebra
    has the same zero count and the fakes are drawn to match it.

    Training keeps the imbalance; the test set holds as many fakes as reals.
    """
    target = AlgebraKind(target)
    reals, labels, fakes = [], [], []
    seen: set = set()
    for i, d in enumerate(_pick(datasets)):
        e = d.to_euclidean()
        reduced = e.socm[class_representatives(d)].astype(np.int64)
        reals.append(reduced)
        labels.append(np.full(reduced.shape[0], int(d.algebra == target), dtype=np.int64))
        rows = fake_data(e, fakes_per_algebra, seed=seed + i, exclude=seen)
        seen |= {row.astype(np.int64).tobytes() for row in rows}
        fakes.append(rows.astype(np.int64))
    real_X = np.concatenate(reals)
    real_y = np.concatenate(labels)
    fake_X = np.concatenate(fakes)

    real_train, real_test = train_test_split(len(real_X), TEST_FRACTION, seed)
    fake_train, fake_test = train_test_split(len(fake_X), TEST_FRACTION, seed + 1)
    fake_test = fake_test[: real_test.size]

    X = np.concatenate([real_X[real_train], fake_X[fake_train]]).astype(np.float32)
    y = np.concatenate([real_y[real_train], np.zeros(fake_train.size, dtype=np.int64)])
    X_test = np.concatenate([real_X[real_test], fake_X[fake_test]]).astype(np.float32)
    y_test = np.concatenate([real_y[real_test], np.zeros(fake_test.size, dtype=np.int64)])
    return TaskData(X, y, Mode.CLASSIFICATION, X_test, y_test)


def build_task_data(config: TrainingConfig, datasets: Dict[AlgebraKind, Dataset]) -> TaskData:
    task = TaskKind(config.task)
    if task is TaskKind.REGRESS:
        if config.algebra is None:
            raise DatasetError("regression needs 'algebra' in the training config")
        (d,) = _pick(datasets, (AlgebraKind(config.algebra),))
        return regression_data(d, config.order, config.grade)
    if task is TaskKind.CLASSIFY_ALGEBRA:
        return algebra_classification_data(datasets, config.order, config.grade, config.augment_by_multiplicity)
    if config.algebra is None:
        raise DatasetError("real-vs-fake needs the target 'algebra' in the training config")
    return real_vs_fake_data(datasets, AlgebraKind(config.algebra), config.fake_per_algebra, config.seed)


@dataclass
class TaskResult:
    summary: TrainingSummary
    trained: TrainedModel
    test_index: np.ndarray
    cv: Optional[CVResult] = None


def run_task(config: TrainingConfig, data: TaskData) -> TaskResult:
    """Cross-validate (or use the fixed test split), then fit the model kept for saliency."""
    if data.X_test is not None:
        trained = mlp_train(config, data.X, data.y, data.mode, output_dim=2)
        accuracy = evaluate(trained.model, data.X_test, data.y_test, data.mode)
        summary = TrainingSummary(
            config=config,
            accuracy=accuracy,
            rows={"train": int(len(data.X)), "test": int(len(data.X_test))},
        )
        return TaskResult(summary, trained, np.arange(len(data.X_test)))

    cv = kfold_cv(config, data.X, data.y, data.mode)
    train, test = train_test_split(len(data.X), TEST_FRACTION, config.seed)
    output_dim = None if data.mode is Mode.REGRESSION else int(data.y.max()) + 1
    trained = mlp_train(config, data.X[train], data.y[train], data.mode, output_dim)
    summary = TrainingSummary(
        config=config,
        accuracy=cv.mean_accuracy,
        fold_accuracies=cv.fold_accuracies,
        rows={"total": int(len(data.X)), "train": int(train.size), "test": int(test.size)},
    )
    logger.info("✅ %s: mean %d-fold accuracy %.4f", config.task, len(cv.folds), cv.mean_accuracy)
    return TaskResult(summary, trained, test, cv)
