import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make `oracles` importable


@pytest.fixture
def rng():
    return np.random.default_rng(42)


ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def record_criterion(tag: str, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((tag, detail))
    print(f"ACCEPTANCE {tag} PASS {detail}".rstrip())


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for tag, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"PASS {tag} {detail}".rstrip())
