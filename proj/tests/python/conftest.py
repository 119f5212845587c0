import os
import pathlib

import pytest

SOURCE_DIR = pathlib.Path(os.environ.get("LIGHTCONE_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))


@pytest.fixture(scope="session")
def source_dir():
    return SOURCE_DIR


@pytest.fixture(scope="session")
def tool():
    path = os.environ.get("LIGHTCONE_TOOL")
    if not path:
        pytest.skip("LIGHTCONE_TOOL not set")
    return path
