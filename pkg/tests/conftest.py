from pathlib import Path

import numpy as np
import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def dataset_path() -> Path:
    path = REPO_ROOT / "data" / "tumor_699.csv"
    assert path.exists(), "bundled dataset missing; run tools/make_dataset.py"
    return path
