import numpy as np
import pytest
import torch
from pydantic import ValidationError

from analysis.mlp import (
    MLP,
    ONE_HOT_WIDTH,
    Mode,
    evaluate,
    kfold_cv,
    kfold_indices,
    load_model,
    mlp_train,
    one_hot_permutations,
    predict,
    save_model,
    train_test_split,
)
from core.exceptions import TrainingDivergedError
from schemas.ml import TrainingConfig

TINY = dict(hidden=[8], epochs=150, patience=40, learning_rate=0.01, batch_size=16)


def clusters(n: int = 60, seed: int = 0):
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 2
    X = rng.normal(scale=0.3, size=(n, 2)) + np.where(y[:, None] == 1, 3.0, -3.0)
    return X.astype(np.float32), y


def test_network_gradients_match_finite_differences():
    torch.manual_seed(0)
    model = MLP(4, [5, 5], 3).double()
    x = torch.randn(6, 4, dtype=torch.float64, requires_grad=True)
    assert torch.autograd.gradcheck(model, (x,), atol=1e-4)
    assert [act for _, _, act in model.layers()] == ["relu", "relu", "identity"]


def test_one_hot_slot_is_position_times_eight_plus_root():
    out = one_hot_permutations(np.array([[0, 1, 2, 3, 4, 5, 6, 7], [7, 6, 5, 4, 3, 2, 1, 0]]))
    assert out.shape == (2, ONE_HOT_WIDTH)
    assert out.sum(axis=1).tolist() == [8.0, 8.0]
    assert np.flatnonzero(out[0]).tolist() == [0, 9, 18, 27, 36, 45, 54, 63]
    assert np.flatnonzero(out[1]).tolist() == [7, 14, 21, 28, 35, 42, 49, 56]


def test_kfold_partitions_rows():
    folds = kfold_indices(23, 5, seed=4)
    assert np.array_equal(np.sort(np.concatenate(folds)), np.arange(23))
    assert {f.size for f in folds} <= {4, 5}
    with pytest.raises(ValueError):
        kfold_indices(10, 1, seed=0)
    train, test = train_test_split(10, 0.2, seed=1)
    assert test.size == 2 and train.size == 8
    assert not set(train) & set(test)


def test_separable_classes_are_learned():
    X, y = clusters()
    trained = mlp_train(TrainingConfig(**TINY), X, y, Mode.CLASSIFICATION)
    assert evaluate(trained.model, X, y, Mode.CLASSIFICATION) >= 0.95
    assert trained.history[0].epoch == 1


def test_regression_accuracy_rounds_every_coefficient():
    model = MLP(2, [], 1)
    with torch.no_grad():
        model.net[0].weight.zero_()
        model.net[0].bias.fill_(3.2)
    X = np.zeros((2, 2), dtype=np.float32)
    assert evaluate(model, X, np.array([[3.0], [4.0]]), Mode.REGRESSION) == 0.5
    assert evaluate(model, X[:0], np.zeros((0, 1)), Mode.REGRESSION) == 0.0


def test_non_finite_loss_aborts_training():
    X, y = clusters(16)
    X[0, 0] = np.nan
    with pytest.raises(TrainingDivergedError):
        mlp_train(TrainingConfig(**TINY), X, y, Mode.CLASSIFICATION)


def test_kfold_cv_reports_every_fold():
    X, y = clusters()
    cv = kfold_cv(TrainingConfig(**{**TINY, "epochs": 20}), X, y, Mode.CLASSIFICATION, k=3)
    assert [f.fold for f in cv.folds] == [0, 1, 2]
    assert sum(f.test_rows for f in cv.folds) == len(X)
    assert cv.mean_accuracy == pytest.approx(np.mean(cv.fold_accuracies))


def test_saved_model_predicts_the_same(tmp_path):
    X, y = clusters(20)
    config = TrainingConfig(**{**TINY, "epochs": 5})
    trained = mlp_train(config, X, y, Mode.CLASSIFICATION)
    path = tmp_path / "model.pt"
    save_model(path, trained, config, [1, 2], {"a8": "a8.csv"})
    model, payload = load_model(path)
    assert payload["test_index"] == [1, 2]
    assert payload["inputs"] == {"a8": "a8.csv"}
    assert payload["mode"] == "classification"
    assert np.allclose(predict(model, X), predict(trained.model, X))


def test_training_config_validation():
    assert TrainingConfig().hidden == [256, 256, 256, 256]
    with pytest.raises(ValidationError):
        TrainingConfig(grade=3)
    with pytest.raises(ValidationError):
        TrainingConfig(hidden=[16, 0])
    with pytest.raises(ValidationError):
        TrainingConfig(learning_rate=0.01, momentum=0.9)
