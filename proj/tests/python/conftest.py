import os
import shutil
from pathlib import Path

import pytest


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("DREM_CLI") or shutil.which("drem")
    if not path:
        pytest.skip("drem executable not available")
    return path


@pytest.fixture(scope="session")
def config_dir():
    return Path(os.environ.get("DREM_CONFIG_DIR", Path(__file__).resolve().parents[2] / "configs"))
