import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def cat_table():
    from gazelab.g2p import MappingTable

    return MappingTable("toy", (("c", ("k",)), ("a", ("æ",)), ("t", ("t",))), ("æ",))
