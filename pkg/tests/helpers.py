import numpy as np

from core.coxeter import socm
from core.dataset import Dataset
from core.root_systems import RootSystem, build_root_system
from schemas.algebra import AlgebraKind


def bipartite_permutation(rs: RootSystem) -> tuple:
    """White roots in ascending order, then black roots in ascending order."""
    white = [i for i, c in enumerate(rs.colouring) if c.value == "W"]
    black = [i for i, c in enumerate(rs.colouring) if c.value == "B"]
    return tuple(white + black)


def build_dataset(kind: AlgebraKind, perms: np.ndarray) -> Dataset:
    rs = build_root_system(kind)
    rows = [socm(rs, p).coefficients() for p in perms]
    return Dataset(kind, perms, np.stack(rows))
