import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from debilandia.tiles import atlas_default


@pytest.fixture(scope="session")
def atlas():
    return atlas_default()
