import os
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

FIXTURES = Path(__file__).resolve().parent / "fixtures"


def pytest_collection_modifyitems(config, items):
    if os.environ.get("ALLCAST_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="set ALLCAST_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))


@pytest.fixture
def load_fixture():
    from services.graph import from_adjacency_text

    def _load(name):
        return from_adjacency_text((FIXTURES / name).read_text(encoding="utf-8"))

    return _load
