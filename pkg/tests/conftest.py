import math

import numpy as np
import pytest

from rayarray import build_hbf_codebook, build_raa


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def raa16():
    return build_raa(16, 0.5 * math.pi)


@pytest.fixture(scope="session")
def raa8():
    return build_raa(8, 0.5 * math.pi)


@pytest.fixture(scope="session")
def dft16():
    return build_hbf_codebook(16)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record a one-line PASS/FAIL verdict for an acceptance criterion."""
    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
