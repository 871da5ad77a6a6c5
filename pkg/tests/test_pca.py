import numpy as np
import pytest

from analysis.pca import (
    COMBINED,
    combined_rows,
    elbow,
    elbow_frame,
    mirror_orders_agree,
    order_panels,
    pca_fit,
    pca_project,
    pca_reconstruct,
    projection_frame,
)
from core.exceptions import DatasetError


def test_full_projection_reconstructs_the_data():
    X = np.random.default_rng(0).normal(size=(50, 6))
    model = pca_fit(X)
    Z = pca_project(model, X, k=6)
    assert np.abs(pca_reconstruct(model, Z) - X).max() < 1e-9


def test_ratios_are_normalised_and_descending():
    X = np.random.default_rng(1).normal(size=(40, 5)) * np.array([5.0, 3.0, 2.0, 1.0, 0.5])
    ratios = pca_fit(X).explained_variance_ratio
    assert ratios.sum() == pytest.approx(1.0)
    assert np.all(np.diff(ratios) <= 0)


def test_elbow_finds_the_rank():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(100, 3)) @ rng.normal(size=(3, 10))
    assert elbow(pca_fit(X)) == 3


def test_bad_shapes_rejected():
    with pytest.raises(DatasetError):
        pca_fit(np.ones((1, 4)))
    model = pca_fit(np.random.default_rng(3).normal(size=(10, 4)))
    with pytest.raises(DatasetError):
        pca_project(model, np.zeros((2, 4)), k=5)


def test_order_panels_on_small_sweep(a8_small):
    panels = order_panels(a8_small)
    assert set(panels) == {f"inv{r}" for r in range(9)} | {COMBINED}
    assert panels[COMBINED].projection.shape == (9 * a8_small.rows, 2)
    assert panels["inv3"].projection.shape == (a8_small.rows, 2)
    assert mirror_orders_agree(panels) == [True, True, True]

    frame = projection_frame(panels["inv1"])
    assert frame.columns.tolist() == ["order", "pc1", "pc2"]
    assert (frame["order"] == 1).all()
    assert len(elbow_frame(panels[COMBINED].model)) == 256


def test_combined_rows_stack_orders(a8_small):
    X, orders = combined_rows(a8_small)
    assert X.shape == (9 * a8_small.rows, 256)
    assert np.bincount(orders).tolist() == [a8_small.rows] * 9
    assert np.array_equal(X[orders == 0][:, 0], np.ones(a8_small.rows))
