import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def point_config() -> dict:
    return json.loads((FIXTURES / "config_point.json").read_text())


@pytest.fixture(scope="session")
def scan_dataset_path() -> Path:
    return FIXTURES / "absorption_synthetic.csv"
