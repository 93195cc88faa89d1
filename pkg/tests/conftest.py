import pytest

from squidmech import reference_device


@pytest.fixture(scope="session")
def device():
    return reference_device()
