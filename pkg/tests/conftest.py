import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fincov.instances import standard_corpus


@pytest.fixture(scope="session")
def corpus():
    return standard_corpus()
