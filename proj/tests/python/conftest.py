import json
import os
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def schema_dir():
    return pathlib.Path(os.environ.get("SPHERICITY_SCHEMA_DIR", ROOT / "docs" / "schema"))


@pytest.fixture(scope="session")
def schema(schema_dir):
    def load(name):
        return json.loads((schema_dir / f"{name}.json").read_text())

    return load


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("SPHERICITY_CLI")
    if not path:
        pytest.skip("SPHERICITY_CLI not set")
    return path


@pytest.fixture(scope="session")
def configs_dir():
    return ROOT / "configs"
