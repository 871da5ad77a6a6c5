from typing import Dict

import numpy as np
import pytest

from core.dataset import Dataset
from core.root_systems import RootSystem, all_permutations, build_root_system
from schemas.algebra import AlgebraKind
from tests.helpers import build_dataset

# Ranks 0..23 fix the first four roots and permute the last four; each
# algebra then has exactly 8 distinct Coxeter elements among them.
SMALL_RANKS = 24


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run tests that need full sweeps")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def root_systems() -> Dict[AlgebraKind, RootSystem]:
    return {kind: build_root_system(kind) for kind in AlgebraKind}


@pytest.fixture(scope="session")
def small_datasets() -> Dict[AlgebraKind, Dataset]:
    perms = np.array(all_permutations()[:SMALL_RANKS])
    return {kind: build_dataset(kind, perms) for kind in AlgebraKind}


@pytest.fixture(scope="session")
def a8_small(small_datasets) -> Dataset:
    return small_datasets[AlgebraKind.A8]


@pytest.fixture(scope="session")
def full_datasets() -> Dict[AlgebraKind, Dataset]:
    from tasks.sweep import full_sweep

    return {kind: full_sweep(build_root_system(kind)) for kind in AlgebraKind}
