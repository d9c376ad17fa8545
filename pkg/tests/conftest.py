import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tubeknots import blocks, patterns  # noqa: E402
from tubeknots.enumerate import generate_polygons  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def systems():
    full = patterns.generate_one_patterns()
    return full, patterns.restrict_no_2sections(full)


@functools.lru_cache(maxsize=None)
def census(n_max: int):
    return tuple(generate_polygons(n_max=n_max))


@pytest.fixture(scope="session")
def full_system():
    return systems()[0]


@pytest.fixture(scope="session")
def restricted_system():
    return systems()[1]


@pytest.fixture(scope="session")
def trefoil_pattern():
    return blocks.make_trefoil_pattern()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
