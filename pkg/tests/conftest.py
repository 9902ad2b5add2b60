import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import three_qubit_fixture  # noqa: E402


@pytest.fixture(scope="session")
def fixture_3q():
    """(Hamiltonian, summary) for the 4-term commuting-projector fixture."""
    return three_qubit_fixture()
