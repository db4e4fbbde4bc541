import pytest

from brachisto import field


@pytest.fixture(scope="session")
def disk_value_grid():
    """Full-resolution free-disk value grid, shared across test modules."""
    return field.value_grid(0.0, 400, 800, 512)


@pytest.fixture(scope="session")
def disk_foliation():
    return field.foliation(0.0, 512)
