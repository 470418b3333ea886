import zlib
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
ACCEPTANCE_LINES: list[str] = []


def random_disk(rng, size, radius=1.0):
    """Complex samples uniform in the disk of the given radius."""
    r = radius * np.sqrt(rng.uniform(size=size))
    return r * np.exp(2j * np.pi * rng.uniform(size=size))


def random_unimodular(rng):
    return np.exp(2j * np.pi * rng.uniform())


@pytest.fixture
def rng(request):
    # seeded per test so failures reproduce
    return np.random.default_rng(zlib.crc32(request.node.name.encode()))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
