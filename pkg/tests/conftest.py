import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "src" / "frontdoor" / "fixtures"


@pytest.fixture
def fixture_path():
    return lambda name: FIXTURES / name
