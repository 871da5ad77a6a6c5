import numpy as np
import pytest

from analysis.mlp import Mode
from analysis.training import (
    algebra_classification_data,
    build_task_data,
    real_vs_fake_data,
    regression_data,
    run_task,
    target_block,
)
from core.exceptions import DatasetError
from schemas.algebra import AlgebraKind
from schemas.ml import TaskKind, TrainingConfig
from tasks.sweep import ZERO_COUNTS


def test_target_block_selects_subinvariant_or_whole_order(a8_small):
    assert target_block(a8_small, 1, 2).shape == (24, 28)
    assert target_block(a8_small, 2, None).shape == (24, 256)


def test_regression_inputs_are_one_hot(a8_small):
    data = regression_data(a8_small, 1, 2)
    assert data.mode is Mode.REGRESSION
    assert data.X.shape == (24, 64)
    assert data.y.shape == (24, 28)
    assert data.X_test is None


def test_algebra_classification_labels(small_datasets):
    data = algebra_classification_data(small_datasets, 1, 2)
    assert data.X.shape == (24, 28)
    assert np.bincount(data.y).tolist() == [8, 8, 8]
    augmented = algebra_classification_data(small_datasets, 1, 2, augment=True)
    assert augmented.X.shape[0] == 72


def test_real_vs_fake_balances_the_test_set(small_datasets):
    data = real_vs_fake_data(small_datasets, AlgebraKind.D8, fakes_per_algebra=10, seed=0)
    assert data.X.shape[1] == 2304
    real_test = int(round(24 * 0.2))
    assert data.X_test.shape[0] == 2 * real_test
    assert np.count_nonzero(data.y_test == 1) <= real_test
    # training keeps every remaining fake as a negative
    assert np.count_nonzero(data.y == 0) >= 24
    assert np.count_nonzero(data.y == 1) + np.count_nonzero(data.y_test == 1) == 8


def test_real_vs_fake_rows_use_orthonormal_zero_counts(small_datasets):
    data = real_vs_fake_data(small_datasets, AlgebraKind.D8, fakes_per_algebra=10, seed=0)
    X = np.concatenate([data.X, data.X_test])
    y = np.concatenate([data.y, data.y_test])
    zeros = (X == 0).sum(axis=1)
    assert set(zeros.tolist()) <= set(ZERO_COUNTS.values())
    assert (zeros[y == 1] == ZERO_COUNTS[AlgebraKind.D8]).all()


def test_build_task_data_requires_algebra(small_datasets):
    with pytest.raises(DatasetError):
        build_task_data(TrainingConfig(task=TaskKind.REGRESS), small_datasets)
    with pytest.raises(DatasetError):
        build_task_data(TrainingConfig(task=TaskKind.REAL_VS_FAKE), small_datasets)
    with pytest.raises(DatasetError):
        build_task_data(TrainingConfig(task=TaskKind.CLASSIFY_ALGEBRA), {AlgebraKind.A8: small_datasets[AlgebraKind.A8]})
    data = build_task_data(TrainingConfig(task=TaskKind.REGRESS, algebra=AlgebraKind.E8, order=2, grade=4), small_datasets)
    assert data.y.shape == (24, 70)


def test_run_task_cross_validates(small_datasets):
    config = TrainingConfig(
        task=TaskKind.CLASSIFY_ALGEBRA, hidden=[8], epochs=3, patience=3, folds=3, batch_size=8
    )
    data = build_task_data(config, small_datasets)
    result = run_task(config, data)
    assert len(result.summary.fold_accuracies) == 3
    assert result.summary.rows["total"] == 24
    assert result.test_index.size == result.summary.rows["test"]
