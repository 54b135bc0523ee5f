import zlib

import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng(request):
    """Philox stream keyed by the test name, so tests do not share randomness."""
    key = zlib.crc32(request.node.name.encode())
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([20240611, key])))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
