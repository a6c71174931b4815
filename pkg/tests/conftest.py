import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ofdmjcas.sysconfig import SystemParams, derive_grid  # noqa: E402

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


@pytest.fixture(scope="session")
def params():
    return SystemParams.table2()


@pytest.fixture(scope="session")
def grid(params):
    return derive_grid(params)


@pytest.fixture(scope="session")
def configs():
    return CONFIGS
