import pytest

from endtangle import config
from endtangle.config import Budgets


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    # Never read or write the real ~/.endtangle during tests
    mock_dir = tmp_path / ".endtangle"
    monkeypatch.setattr(config, "CONFIG_DIR", mock_dir)
    monkeypatch.setattr(config, "CONFIG_FILE", mock_dir / "config.json")
    for knob in config.KNOBS:
        monkeypatch.delenv(config.ENV_PREFIX + knob.upper(), raising=False)
    return mock_dir


@pytest.fixture
def budgets():
    return Budgets()
