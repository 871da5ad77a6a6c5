# analysis/pca.py
"""Principal components of SOCM invariants, fitted per order and over all orders."""
import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from core.coxeter import ORDERS
from core.dataset import Dataset
from core.exceptions import DatasetError

logger = logging.getLogger(__name__)

COMBINED = "combined"


@dataclass(frozen=True)
class PCAModel:
    mean: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray
    explained_variance_ratio: np.ndarray

    @property
    def n_components(self) -> int:
        return int(self.components.shape[0])


def pca_fit(X: np.ndarray) -> PCAModel:
    """Eigen-decomposition of the 1/(N-1) covariance of the centred, unstandardised data."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DatasetError("PCA needs at least two rows", shape=X.shape)
    mean = X.mean(axis=0)
    centred = X - mean
    cov = centred.T @ centred / (X.shape[0] - 1)
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = np.clip(eigenvalues[order], 0.0, None)
    components = eigenvectors[:, order].T
    total = eigenvalues.sum()
    ratio = eigenvalues / total if total > 0 else np.zeros_like(eigenvalues)
    return PCAModel(mean, components, eigenvalues, ratio)


def pca_project(m: PCAModel, X: np.ndarray, k: int = 2) -> np.ndarray:
    if not 1 <= k <= m.n_components:
        raise DatasetError(f"cannot project onto {k} of {m.n_components} components")
    return (np.asarray(X, dtype=np.float64) - m.mean) @ m.components[:k].T


def pca_reconstruct(m: PCAModel, Z: np.ndarray) -> np.ndarray:
    Z = np.asarray(Z, dtype=np.float64)
    return Z @ m.components[:Z.shape[1]] + m.mean


def log_ratios(m: PCAModel) -> np.ndarray:
    """log10 explained-variance ratios, floored at the float resolution of the largest."""
    ratios = m.explained_variance_ratio
    if ratios.size == 0 or ratios[0] <= 0:
        return np.zeros_like(ratios)
    floor = ratios[0] * np.finfo(np.float64).eps
    return np.log10(np.maximum(ratios, floor))


def elbow(m: PCAModel) -> int:
    """1-based component after which the log ratio drops the most in one step."""
    logs = log_ratios(m)
    if logs.size < 2:
        return logs.size
    return int(np.argmax(logs[:-1] - logs[1:])) + 1


# -- panels ---------------------------------------------------------------------


@dataclass
class PCAPanel:
    name: str
    model: PCAModel
    projection: np.ndarray
    orders: np.ndarray


def combined_rows(d: Dataset) -> Tuple[np.ndarray, np.ndarray]:
    """All nine invariants of every row stacked as 256-vectors, with their order labels."""
    blocks = [d.order_block(r) for r in range(ORDERS)]
    X = np.concatenate(blocks).astype(np.float64)
    orders = np.repeat(np.arange(ORDERS), d.rows)
    return X, orders


def order_panels(d: Dataset, k: int = 2) -> Dict[str, PCAPanel]:
    """One fit per order plus the combined fit, each projected onto ``k`` components."""
    panels: Dict[str, PCAPanel] = {}
    for r in range(ORDERS):
        X = d.order_block(r).astype(np.float64)
        model = pca_fit(X)
        panels[f"inv{r}"] = PCAPanel(f"inv{r}", model, pca_project(model, X, k), np.full(d.rows, r))
    X, orders = combined_rows(d)
    model = pca_fit(X)
    panels[COMBINED] = PCAPanel(COMBINED, model, pca_project(model, X, k), orders)
    logger.info("✅ %s PCA: %d panels, combined elbow at component %d", d.algebra.label, len(panels), elbow(model))
    return panels


def projection_frame(panel: PCAPanel) -> pd.DataFrame:
    frame = pd.DataFrame(panel.projection, columns=[f"pc{i + 1}" for i in range(panel.projection.shape[1])])
    frame.insert(0, "order", panel.orders)
    return frame


def elbow_frame(m: PCAModel) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "component": np.arange(1, m.n_components + 1),
            "ratio": m.explained_variance_ratio,
            "log_ratio": log_ratios(m),
        }
    )


def mirror_orders_agree(panels: Dict[str, PCAPanel], tol: float = 1e-9) -> List[bool]:
    """Per r in 1..3, whether the Inv_r and Inv_{8-r} projections coincide."""
    return [
        bool(np.allclose(panels[f"inv{r}"].projection, panels[f"inv{ORDERS - 1 - r}"].projection, atol=tol))
        for r in range(1, (ORDERS - 1) // 2)
    ]
