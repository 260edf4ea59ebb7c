import pytest

from src.config import RecsumConfig, reset_config, set_config


@pytest.fixture(autouse=True)
def default_config():
    """Run every test against the built-in defaults, progress bars off."""
    set_config(RecsumConfig(progress=False))
    yield
    reset_config()
