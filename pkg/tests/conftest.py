from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from dpkmeans.ingest import load_dataset

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def iris():
    return load_dataset("iris")[1]


@pytest.fixture(scope="session")
def ionosphere():
    return load_dataset(f"ionosphere={DATA_DIR / 'ionosphere.data'}")[1]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.LINES):
            terminalreporter.write_line(line)
