"""Test configuration."""

from typing import Iterator

import numpy as np
import pytest
import structlog

from blowuprank.config import SearchConfig
from blowuprank.gf import FieldSpec, field_make
from blowuprank.logging import configure_logging


def pytest_configure(config: pytest.Config) -> None:
    """Configure pytest."""
    config.addinivalue_line(
        "markers",
        "slow: long exhaustive runs, deselect with -m 'not slow'",
    )


@pytest.fixture(autouse=True)
def reset_logging() -> Iterator[None]:
    """Restore the package default after tests that reconfigure logging."""
    yield
    structlog.reset_defaults()
    configure_logging()


@pytest.fixture
def gf2() -> FieldSpec:
    return field_make(2)


@pytest.fixture
def gf3() -> FieldSpec:
    return field_make(3)


@pytest.fixture
def gf4() -> FieldSpec:
    return field_make(2, 2)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for property tests."""
    return np.random.default_rng(20240611)


@pytest.fixture
def search_config() -> SearchConfig:
    """Single-threaded search budget."""
    return SearchConfig(threads=1)
